"""Exact shuffle-algebra computations for quantum affine superalgebras."""
