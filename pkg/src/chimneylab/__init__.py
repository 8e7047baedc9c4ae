"""Numerical laboratory for chimney domains, conformal moduli, and limit sets
of vertically compressed Teichmüller rays.

The library is organized around a pipeline:

* :mod:`chimneylab.sequences` -- chimney sequences {a_n}, {b_n} in log space
  and the exponent quantities m_n, M_n whose liminf/limsup decide divergence.
* :mod:`chimneylab.domains` -- rectilinear truncations of the chimney domains
  with marked boundary quadrilaterals.
* :mod:`chimneylab.laminations` -- geodesic boxes, the Liouville measure, and
  measured laminations with symbolic circle endpoints.
* :mod:`chimneylab.modulus` -- conformal modulus: closed forms, an
  elliptic-integral disk quadrilateral oracle, a graded-mesh PDE solver, and
  analytic sandwich bounds.
* :mod:`chimneylab.rays` -- epsilon sweeps, rotation orbits, Kronecker
  approximation, target subsequences, and divergence verdicts.
"""

from chimneylab.sequences import (
    Factorial,
    RisingFactorial,
    Power,
    PowerPair,
    Explicit,
    ChimneySequence,
    ExponentPair,
    make_sequence,
    log_products,
    exponents,
    exponent_limits,
    validate_hypotheses,
    phi,
    invert_phi,
    closed_form_limits,
)
from chimneylab.domains import (
    OneSided,
    TwoSided,
    MultiK,
    TruncationConfig,
    AxisPolygonDomain,
    build_domain,
    vertical_compress,
    mark_quadrilateral,
    boundary_symbol_order,
)
from chimneylab.laminations import (
    CirclePoint,
    GeodesicBox,
    MeasuredLamination,
    LimitSetDescriptor,
    liouville_box,
    lamination_mass,
    build_limit_lamination,
    limit_set,
    mod_liouville_residual,
)
from chimneylab.modulus import (
    MeshConfig,
    ModulusResult,
    SandwichBound,
    rect_modulus,
    annulus_modulus,
    reldist_upper_bound,
    disk_quad_modulus,
    solve_modulus,
    normalized_M,
    sandwich_bounds,
    subfamily_upper_bounds,
)
from chimneylab.rays import (
    SweepRow,
    OrbitReport,
    sweep,
    rotation_orbit,
    kronecker_search,
    target_subsequence,
    independence_check,
    verdict,
)

__version__ = "0.1.0"
