"""
Events Campaign.
Lists the front-facet events found by shrinking on a geometric u grid.
"""
from typing import Any, Dict

import mpmath

from core.config import RunConfig
from tools.event_tool import front_facet_events

from .problem import build_problem, campaign


@campaign("events")
def run_events(config: RunConfig) -> Dict[str, Any]:
    """
    Detect front-facet events over [u_min, u_max] with `samples` grid points.

    Returns:
        Dictionary with one entry per event: u, s, λ_1 (12 significant digits), the witness
        coefficients and the grid point it was shrunk from.
    """
    lattice, path = build_problem(config)
    events = front_facet_events(
        lattice, path, config.u_min, config.u_max, config.samples,
        config.method, config.budget, config.workers,
    )
    return {
        "passed": True,
        "count": len(events),
        "events": [
            {
                "u": event.u.to_decimal(12),
                "s": mpmath.nstr(event.s, 12),
                "lambda1": event.lambda1.to_decimal(12),
                "witness": list(event.witness.coefficients),
                "shrunk_from": event.grid_u.to_decimal(12) if event.grid_u is not None else None,
            }
            for event in events
        ],
    }
