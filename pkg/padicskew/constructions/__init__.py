"""Rokhlin towers, the fiberwise conjugator, p-adic approximation and seeded samplers."""
