"""Pragmatic quantum-logic workbench."""
