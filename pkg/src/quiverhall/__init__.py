"""Exact Hall algebras of quiver representations over prime fields.

The package computes, with exact arithmetic in Q(sqrt(q)):

* the module category rep_k(Q) of an acyclic quiver over F_q (homs,
  extensions, submodule enumeration, Krull-Schmidt decomposition,
  projective resolutions, BGP reflection at a sink);
* its classical, twisted and extended Hall algebras, with structure
  constants computed by two independent routes and cross-checked;
* Z/2-graded and bounded Z-graded complexes, their quantum tori of acyclic
  complexes, and the semi-derived Hall algebras built on quasi-isomorphism
  class normal forms;
* verification suites for quantum Serre relations, quantum-group relation
  families, generator/relation presentations, Euler-form identities, and the
  reflection isomorphism between reduced twisted algebras.
"""

from .quiver import Quiver, a_n_quiver
from .reps import RepCategory
from .hall import HallAlgebra
from .sdh2 import SDH2Algebra
from .sdhz import SDHZAlgebra
from .reflection import SinkReflection
from .scalars import CoeffScalar, q_power, v_power

__all__ = [
    "Quiver", "a_n_quiver", "RepCategory", "HallAlgebra",
    "SDH2Algebra", "SDHZAlgebra", "SinkReflection",
    "CoeffScalar", "q_power", "v_power",
]

__version__ = "0.1.0"
