import cProfile
import pstats
import io
import numpy as np
from pathlib import Path
import sys

# Add the project root to the Python path
project_root = Path(__file__).resolve().parent.parent
sys.path.append(str(project_root))

from classes.bayes_models import PriorSpec
from classes.sim_models import ExperimentConfig
from functions.bayes_funcs import log_marginal_gaussian_slab
from functions.experiment_funcs import run_multivariate, run_univariate, univariate_models
from functions.linear_funcs import build_design
from functions.plot_funcs import create_risk_curve_chart, figure_to_svg


def profile_function(func, *args, **kwargs):
    profiler = cProfile.Profile()
    profiler.enable()
    result = func(*args, **kwargs)
    profiler.disable()

    s = io.StringIO()
    ps = pstats.Stats(profiler, stream=s).sort_stats('cumulative')
    ps.print_stats(30)  # top 30 by cumulative time

    print(f"Profiling results for {func.__name__}:")
    print(s.getvalue())

    return result


def create_sample_configs():
    univariate = ExperimentConfig(
        experiment="univariate",
        seed=7,
        repeats=10,
        criteria=("XAICc", "XAICc2", "AICc", "BIC", "BMS", "GCV", "FAICc", "BMA"),
        truth="f2",
    )
    multivariate = ExperimentConfig(
        experiment="multivariate",
        seed=7,
        repeats=5,
        criteria=("XAICc", "FAICc", "AICc", "BIC", "BMS", "GCV", "XAICcw", "BMA"),
        truth="fmulti",
    )
    return univariate, multivariate


def slab_marginals(xs, y):
    prior = PriorSpec(kind="gaussian_slab", slab_variance=100.0)
    return [log_marginal_gaussian_slab(build_design(s, xs), y, prior) for s in univariate_models(6)]


def main():
    univariate, multivariate = create_sample_configs()

    rng = np.random.default_rng(7)
    xs = rng.standard_normal(100)
    profile_function(slab_marginals, xs, np.abs(xs) + 0.3 * rng.standard_normal(100))

    report = profile_function(run_univariate, univariate)
    fig = profile_function(create_risk_curve_chart, report.risk, "f2")
    profile_function(figure_to_svg, fig)

    profile_function(run_multivariate, multivariate, threads=4)


if __name__ == "__main__":
    main()
