"""Tight groupoid of an inverse semigroup of partial isometries on l2(N) (x) l2(N) (x) l2(Z).

Modules: ``word_algebra`` (symbolic words), ``semilattice`` (projections and
characters), ``groupoid`` (germs, fibres, orbits), ``operator_model``
(truncated sparse realization), ``representations`` (induced representations
and Soibelman families), ``suites`` and ``cli``.
"""

from .errors import (GramDegeneracyMismatch, InternalInconsistency, InvalidWord, NotComposable,
                     NotInDomain, ParseError, TightGroupoidError, WitnessNotFound)
from .groupoid import Germ, act, canonicalize, compose, inverse
from .semilattice import INF, Projection, UnitPoint, parse_unit
from .word_algebra import Word, adjoint, generator, parse_word, word_mul

__version__ = "0.1.0"
