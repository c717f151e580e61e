"""Exact finite-groupoid representation theory: Kan extensions, the Nakayama map, span quantization."""
