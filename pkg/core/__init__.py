"""
Core module for the minima lab.
Exact numbers, lattices and the successive-minima engine.
"""

from .errors import LabError, InputError
from .lattice import Box, Lattice, PathSpec, ThetaSpec, box_at, dual_lattice, primal_lattice
from .minima import LatticePoint, MinimaResult, box_norm, enumerate_in_box, successive_minima
from .scale import ScaleValue

__all__ = [
    'LabError',
    'InputError',
    'Box',
    'Lattice',
    'PathSpec',
    'ThetaSpec',
    'box_at',
    'dual_lattice',
    'primal_lattice',
    'LatticePoint',
    'MinimaResult',
    'box_norm',
    'enumerate_in_box',
    'successive_minima',
    'ScaleValue',
]
