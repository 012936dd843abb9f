"""Rational codecs and JSON/CSV serialization helpers."""
