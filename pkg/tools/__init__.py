"""
Tools package - event, exponent, lemma and trace IO tools.
"""

from .event_tool import (
    Event,
    EventRelationReport,
    companion_scale,
    front_facet_events,
    shrink_to_event,
    verify_event_relations,
)
from .exponent_tool import (
    BetaAlpha,
    CheckReport,
    ExponentEstimates,
    Trace,
    TraceSample,
    beta_alpha_direct,
    beta_alpha_from_psi,
    check_bounds,
    check_dual_inequality,
    check_main_inequalities,
    check_transference,
    confirm_stability,
    divergence_trend,
    estimate_exponents,
    liminf_consistency,
    minkowski_band,
    psi_trace,
)
from .lemma_tool import (
    LemmaInstance,
    LemmaReport,
    generate_instance,
    lemma_core_check,
    random_unimodular_lattice,
    run_lemma_trials,
)
from .trace_io_tool import dump_instance, load_instance, read_trace_csv, write_trace_csv

__all__ = [
    'Event',
    'EventRelationReport',
    'companion_scale',
    'front_facet_events',
    'shrink_to_event',
    'verify_event_relations',
    'BetaAlpha',
    'CheckReport',
    'ExponentEstimates',
    'Trace',
    'TraceSample',
    'beta_alpha_direct',
    'beta_alpha_from_psi',
    'check_bounds',
    'check_dual_inequality',
    'check_main_inequalities',
    'check_transference',
    'confirm_stability',
    'divergence_trend',
    'estimate_exponents',
    'liminf_consistency',
    'minkowski_band',
    'psi_trace',
    'LemmaInstance',
    'LemmaReport',
    'generate_instance',
    'lemma_core_check',
    'random_unimodular_lattice',
    'run_lemma_trials',
    'dump_instance',
    'load_instance',
    'read_trace_csv',
    'write_trace_csv',
]
