"""Random geometric graphs under node failures and threshold cascades."""

from ._geonet import (  # noqa: F401
    Boundary,
    FailureRule,
    Graph,
    Region,
    ThresholdDistribution,
    __version__,
    apply_failures,
    build_graph,
    classify,
    estimate_lambda_c,
    estimate_qc,
    generate_poisson,
    generate_uniform,
    run_cascade,
    run_sweep,
    theory,
)
