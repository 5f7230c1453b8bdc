"""
A plane, its polarity, and the polarity graph
=============================================

Coordinatize the plane, swap points and lines with the polarity, and look at
the structure the counting argument relies on.
"""

from fanoforge import Affine, Plane, PolarityGraph, Regular, Slope, field_presemifield, polar
from fanoforge.plane import verify_plane_axioms

plane = Plane(field_presemifield(2))
print(plane, "has", plane.size, "points")

# y = m o x + k lines, verticals, and the line at infinity
p, q = Affine(1, 2), Affine(3, 0)
ln = plane.join(p, q)
print("join", p, q, "->", ln)
print("meet", ln, Regular(0, 0), "->", plane.meet(ln, Regular(0, 0)))
print("axioms:", verify_plane_axioms(plane).ok)

# The polarity sends Affine(a, b) to Regular(a, b) and Slope(m) to Vertical(m).
print("polar of", Slope(2), "is", polar(Slope(2)))

G = PolarityGraph(plane)
print("absolute points:", [plane.point(a) for a in G.absolutes])
print("they all lie on", G.baer_line, "whose pole is", plane.point(G.pole))

# Every other vertex hangs off exactly one absolute point.
for i, cls in enumerate(G.partition()):
    a = plane.point(G.absolutes[i])
    print(f"  class of {a}: {[plane.point(v) for v in cls]}")

# The five local properties, exhaustively at this size.
print(G.check_lemma21().as_dict())
