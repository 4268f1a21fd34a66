"""finloc: local approximation of continuous structures at finite, computable scale.

Residues mod q carry a partial metric near the origin: an element is "local"
when it reconstructs to a bounded-height rational, and inside the uniqueness
window 2*L**2 < q that reconstruction is exact and unique. On top of that
live finite models of rotation/unitary groups and affine varieties, a
[0,1]-valued formula evaluator, and prime-ladder convergence scans.
"""

__version__ = "0.1.0"

from .residues import (  # noqa: F401
    GaussianResidue,
    Modulus,
    Residue,
    ResidueMatrix,
    is_prime,
    make_modulus,
    next_prime,
    project_ring_to_field,
)
from .localmetric import (  # noqa: F401
    BoundedRational,
    LocalityScale,
    RandomSample,
    audit_metric,
    bounded_rationals,
    decode,
    dist,
    encode,
    enumerate_sort,
    in_sort,
    norm,
    sort_level_for,
)
from .polynomials import Polynomial, PolySystem  # noqa: F401
from .structures import (  # noqa: F401
    GaussianRational,
    GroupFamily,
    RationalMatrix,
    covering_radius,
    decode_matrix,
    encode_matrix,
    generate_rational_point,
    group_hom_check,
    make_reference_grid,
    variety_points,
)
from .logic import (  # noqa: F401
    PrimeLadder,
    eval_finite,
    eval_limit,
    los_scan,
    parse_formula,
    print_formula,
    required_modulus,
)
from . import errors  # noqa: F401
