"""Exact-arithmetic toolkit for matrix subalgebras and their centralizers.

The package computes closures and centralizers of sets of square matrices
over exactly represented fields (Q, GF(p), GF(p^d)), certifies that every
small-dimensional subalgebra commutes with some non-scalar matrix, reduces
full-rank n x (n+1) matrix pencils to the canonical Kronecker pair, and
classifies the 4-dimensional trivial-centralizer subalgebras in odd ambient
dimension up to conjugacy.
"""

from commutant.fields import QQ, GF, Field, parse_field_label
from commutant.matrices import Matrix

__all__ = ["QQ", "GF", "Field", "parse_field_label", "Matrix"]

__version__ = "0.1.0"
