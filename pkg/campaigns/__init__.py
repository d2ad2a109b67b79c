"""
Campaigns package - one orchestration function per CLI subcommand.
"""

from .trace_campaign import run_trace
from .events_campaign import run_events
from .exponents_campaign import run_exponents
from .lemma_campaign import run_lemma
from .corollary_campaign import run_corollary
from .theorem_campaign import run_theorem
from .transference_campaign import run_transference
from .bounds_campaign import run_bounds

CAMPAIGNS = {
    'trace': run_trace,
    'events': run_events,
    'exponents': run_exponents,
    'lemma': run_lemma,
    'corollary': run_corollary,
    'theorem': run_theorem,
    'transference': run_transference,
    'bounds': run_bounds,
}

__all__ = [
    'CAMPAIGNS',
    'run_trace',
    'run_events',
    'run_exponents',
    'run_lemma',
    'run_corollary',
    'run_theorem',
    'run_transference',
    'run_bounds',
]
