"""Fano subplanes in even-order planes with an orthogonal polarity.

Build a plane from a commutative presemifield of order 2^k, form its
polarity graph, and find, verify and count the Fano subplanes through the
pole of the Baer line.
"""

from .algebra import (
    AxiomReport,
    Presemifield,
    field_presemifield,
    knuth_binary_presemifield,
    presemifield_from_array,
    presemifield_from_table,
    solve_left,
    verify_axioms,
)
from .fano import (
    FanoCertificate,
    Triangle,
    TriangleCensus,
    assemble_fano,
    census,
    count_fanos_through_pole,
    count_nonabsolute_edges,
    enumerate_good_triangles,
    find_fano,
    lower_bound,
    triangle_cap_at_absolute,
    triangle_of_edge,
)
from .gf2 import default_modulus, gf_mul, gf_trace
from .plane import (
    Affine,
    IncidenceStructure,
    Infinity,
    LineAtInfinity,
    Plane,
    Regular,
    Slope,
    Vertical,
    restrict,
    verify_plane_axioms,
)
from .polarity import PolarityGraph, absolute_points, baer_line, is_absolute, polar, pole

__version__ = "0.1.0"
