from poshrink.experiments.catalog import (  # noqa
    EXPERIMENTS,
    ExperimentDefinition,
    NamedPrior,
    default_lambda_grid,
    get_experiment,
)
from poshrink.experiments.metrics import (  # noqa
    MetricSummary,
    Metrics,
    SweepReport,
    eval_metrics,
    kl_distance,
    summarize_metrics,
    sweep_leave_one_out_metrics,
    ws_distance,
)
from poshrink.experiments.plot_data import emit_plot_data, plot_frame, write_experiment, write_sidecar  # noqa
from poshrink.experiments.runner import ExperimentResult, ReductionRow, RiskRow, run_experiment  # noqa
