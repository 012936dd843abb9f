"""Relative mixing and rigidity: conditional expectations, defects and category predicates."""
