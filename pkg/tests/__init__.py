"""Test suite for torus-multiplier-lab."""
