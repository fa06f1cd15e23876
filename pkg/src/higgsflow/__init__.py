"""Exact-arithmetic laboratory for a rational self-map of the projective
line attached to rank-two logarithmic data on a four-punctured line, with an
independent elliptic-curve oracle for cross-checking."""

from .errors import (
    HiggsflowError,
    NotPrime,
    EvenPrime,
    DegreeNotDivisor,
    DivisionByZeroPoly,
    ZeroPolynomial,
    BothZero,
    NotFrobeniusComposite,
    InsufficientSamples,
    InconsistentSamples,
    DegreeOverflow,
    PointsOnDifferentCurves,
    FieldTooLarge,
    LambdaNotInPrimeField,
    NoValidFiltration,
    NonUniqueFiltration,
    LiftNotFound,
)
from .field import (
    ExtensionField,
    FieldElement,
    build_field,
    embed,
    frobenius,
    frobenius_inverse,
    is_prime,
    is_square,
    min_subfield_degree,
    norm_to_prime,
    project,
    sqrt,
    subfield_member,
    trace_to_prime,
)
from .poly import (
    Poly,
    ProjPoint,
    RationalMap,
    fixed_point_divisor,
    frobenius_decompose,
    interpolate_rational,
    iterate_map,
    roots_with_multiplicity,
    taylor_expansion,
)
from .elliptic import (
    CurvePoint,
    LegendreCurve,
    deuring_supersingular,
    division_poly,
    frobenius_trace,
    lattes_p,
    n_torsion_x,
    point_count,
    torsion_order,
    x_mult,
)
from .flow import (
    HiggsPoint,
    HodgeFiltration,
    LogFlatBundle,
    conjecture_check,
    grade_and_twist,
    hodge_filtration,
    inverse_cartier,
    phi_map,
    phi_pointwise,
)
from .dynamics import (
    CensusEntry,
    LiftStep,
    PeriodicCensus,
    TorsionReport,
    artin_schreier_solve,
    deformation_coefficient,
    lift_to_curve,
    lifting_tower_sim,
    periodic_census,
    separability_report,
    torsion_correspondence,
    torsion_points_are_periodic,
)
from .certificates import (
    Certificate,
    dump_certificate,
    load_certificate,
)

__version__ = "0.1.0"
