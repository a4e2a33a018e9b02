"""Finite loops, their inner mappings, and doubling constructions."""
