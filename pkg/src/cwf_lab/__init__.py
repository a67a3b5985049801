"""Executable semantics for categories with families over finite presheaf
models, verified exhaustively at desk scale.

The core package builds every object of the theory as explicit finite
tables (categories, presheaves, semantic types and terms, the
comprehension structure, function spaces, internalized base structure,
and the constant-presheaf modality) and checks every law by exact table
equality.  A FastAPI service and the ``cwf-lab`` command line expose
validation, law suites, and machine-readable reports.
"""

__version__ = "0.1.0"

from .cwf import (  # noqa: F401
    DepTy,
    Term,
    comprehension,
    enumerate_terms,
    ext,
    proj_p,
    q_morphism,
    tm_subst,
    ty_subst,
    validate_depty,
    validate_term,
    var_v,
)
from .fincat import (  # noqa: F401
    FinCat,
    Mor,
    chain,
    compose,
    hom_set,
    terminal_category,
    validate_category,
    walking_arrow,
)
from .presheaf import (  # noqa: F401
    NatTrans,
    Presheaf,
    bang,
    category_of_elements,
    enumerate_nats,
    nat_compose,
    nat_id,
    terminal_presheaf,
    validate_nat,
    validate_presheaf,
)
