"""First-order logic with inductive definitions: semantics, coding and cyclic proofs."""

__version__ = "0.1.0"
