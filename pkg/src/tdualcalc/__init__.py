"""Exact symbolic engine for elliptic and log geometry, T-duality and blow-ups."""

from .blowup import BlowdownMap, blowdown_chart, fiberwise_iso_check, induced_divisor, pullback_blowdown
from .chart import (
    Atlas,
    ConnectionForm,
    Divisor,
    TorusAction,
    atlas_check_global,
    check_connection,
    curvature,
    elliptic_divisor,
    im_star,
    projective_atlas,
    standard_action,
)
from .coeffring import FnElem, RingError, is_smooth_fn, substitute, torus_average
from .coords import Chart, ChartError, MonomialMap, complex_log_chart, elliptic_chart, real_log_chart, smooth_chart
from .forms import (
    Form,
    Multivector,
    contract,
    d,
    exp_form,
    is_invariant,
    is_smooth_form,
    lie_derivative,
    proportionality,
    pullback,
    same_line,
    to_complex_frame,
    to_polar,
)
from .gauss import QI
from .genstruct import (
    GenSection,
    clifford,
    d_H,
    dH_closed,
    descends,
    dorfman,
    is_pure,
    mukai_nondeg,
    pairing,
    stable_check,
)
from .residues import ResidueError, res_log, res_log2, res_point, res_q, res_r, res_r2, restrict_to_stratum
from .tduality import DualityData, build_F_from_connections, check_F, cochain_verify, make_correspondence, tau, tau_hat

__version__ = "0.1.0"
