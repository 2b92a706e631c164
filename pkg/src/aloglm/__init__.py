"""Approximate leave-one-out risk estimation for regularized GLMs."""

__version__ = "0.1.0"

from ._backend import NUMBA_ENABLED, backend_name
from .alo import (
    AloReport,
    alo_bridge,
    alo_convergence_diagnostic,
    alo_elastic_net,
    alo_l1,
    alo_l1_bracket,
    alo_smooth,
    metric_values,
)
from .crossval import CvReport, kfold, lo_exact
from .data import Dataset, ingest_csv
from .datagen import (
    Covariance,
    DesignSpec,
    TruthSpec,
    covariance,
    gen_beta,
    gen_design,
    gen_response,
    oracle_linear_risk,
)
from .families import (
    LossFamily,
    gaussian,
    logistic,
    loss_d1,
    loss_d2,
    loss_value,
    poisson,
    poisson_softrect,
    pseudo_huber,
)
from .penalties import (
    Penalty,
    bridge,
    elastic_net,
    elastic_net_split,
    l1,
    pen_d1,
    pen_d2,
    pen_value,
    prox,
    ridge,
    smoothed_l1,
    smoothed_l1_sup_gap,
)
from .solver import FitConfig, FitResult, fit, fit_leave_one_out, fit_path

__all__ = [
    "NUMBA_ENABLED",
    "backend_name",
    "AloReport",
    "alo_bridge",
    "alo_convergence_diagnostic",
    "alo_elastic_net",
    "alo_l1",
    "alo_l1_bracket",
    "alo_smooth",
    "metric_values",
    "CvReport",
    "kfold",
    "lo_exact",
    "Dataset",
    "ingest_csv",
    "Covariance",
    "DesignSpec",
    "TruthSpec",
    "covariance",
    "gen_beta",
    "gen_design",
    "gen_response",
    "oracle_linear_risk",
    "LossFamily",
    "gaussian",
    "logistic",
    "loss_d1",
    "loss_d2",
    "loss_value",
    "poisson",
    "poisson_softrect",
    "pseudo_huber",
    "Penalty",
    "bridge",
    "elastic_net",
    "elastic_net_split",
    "l1",
    "pen_d1",
    "pen_d2",
    "pen_value",
    "prox",
    "ridge",
    "smoothed_l1",
    "smoothed_l1_sup_gap",
    "FitConfig",
    "FitResult",
    "fit",
    "fit_leave_one_out",
    "fit_path",
]
