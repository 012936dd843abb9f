"""Tests for padicskew."""
