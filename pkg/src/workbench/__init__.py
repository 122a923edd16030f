"""Exact/arbitrary-precision workbench for rational gl(n) spin chains.

Subpackage map:

* scalars / poly / linalg / kern -- exact fields, shift calculus, matrices
* reps      -- gl(n) representation backends and Gelfand-Tsetlin patterns
* chain     -- Lax/monodromy/quantum minors/fused transfer matrices
* sov       -- MCT twist, B and C operators, separated-variable bases
* qsys      -- Q-functions, QQ-relations, Wronskian transfer matrices
* brackets  -- functional scalar products, measures, form factors
* exprs/ybe/elliptic/ads2 -- Yang-Baxter catalogue, boost charges, AdS2
* cli       -- `workbench` command-line entry point
"""

from .kern import COMPILED, backend_name

__version__ = "0.1.0"
__all__ = ["COMPILED", "backend_name", "__version__"]
