"""Exact computation in join-semilattices: the pair semilattice with
complementary generators, its free distributive extension, congruence
lattices of finite table algebras, and the property suites tying them
together."""

__version__ = "0.1.0"
