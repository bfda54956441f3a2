"""Divisibility of divisor classes and prime-to-p rational torsion of
Jacobians for curves over local fields with totally degenerate semi-stable
reduction, via algebraic tori over the residue field."""

__version__ = "0.1.0"
