"""
Lemma Campaign.
Randomized front-facet lemma suite, or the replay of one saved instance.
"""
from typing import Any, Dict

from core.config import RunConfig
from core.errors import LemmaViolation
from core.observability import logger
from tools.lemma_tool import lemma_core_check, run_lemma_trials
from tools.trace_io_tool import dump_instance, load_instance, output_path

from .problem import campaign


@campaign("lemma")
def run_lemma(config: RunConfig) -> Dict[str, Any]:
    """
    Run `trials` randomized lemma instances (dimension `dim`, or 2, 3 and 4 in turn).

    Every violating instance is written to a replay file before LemmaViolation is raised.

    Returns:
        Dictionary with trial counts and the "<passed>/<checked> pass" summary.
    """
    if config.replay:
        instance = load_instance(output_path(config.replay))
        report = lemma_core_check(instance, budget=config.budget)
        return {
            "passed": report.passed,
            "replay": config.replay,
            "floor_coefficients": list(report.floor_coefficients),
            "constructed": [list(point.coefficients) for point in report.constructed],
            "summary": "1/1 pass",
        }

    dims = (config.dim,) if config.dim else (2, 3, 4)
    suite = run_lemma_trials(
        config.seed, config.trials, dims, config.entry_bound, config.denominator_bound,
        config.budget, config.workers,
    )
    if suite.violations:
        paths = [dump_instance(outcome.instance, config.replay_dir) for outcome in suite.violations]
        for outcome, path in zip(suite.violations, paths):
            logger.log_check_result("l:core", False, seed=outcome.seed, replay=path, reason=outcome.message)
        raise LemmaViolation(
            f"{len(paths)} lemma violation(s), first replay file {paths[0]}", replay_path=paths[0]
        )
    return {"passed": True, "dims": list(dims), **suite.as_dict()}
