"""Plaintext oracle, program generator, security games and benchmarks."""
