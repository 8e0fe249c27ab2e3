"""Plot data as CSV rows (series, x, y); plotting itself is left to external tools."""
import csv
import io

import numpy as np
from scipy.optimize import brentq

from . import birkhoff, covariant

FIGURES = ("covariant", "negativity", "two-copy")


def covariant_rows(d: int, n: int = 200):
    """State triangle, boundary of the unitary mixtures, the U(d)-covariant segment
    and the covariant family. The unit square of entanglement-breaking channels is
    only a visual guide; no formula for that region is implemented."""
    rows = [("states", x, y) for x, y in [(1.0, d), (-1.0, 0.0), (1.0, 0.0), (1.0, d)]]
    rows += [("isotropic", 1.0, float(d)), ("isotropic", 1 / (d + 1), 0.0)]
    rows += [("entanglement_breaking_guide", x, y) for x, y in [(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)]]
    if d % 2 == 0:
        rows += [("mixtures", x, y) for x, y in [(1.0, d), (-1.0, 0.0), (1.0, 0.0), (1.0, d)]]
    else:
        pts = covariant.boundary_points(d, n)
        # start at (1, 0), run along the bottom, then up the curve
        rows += [("mixtures", 1.0, 0.0), ("mixtures", pts[0, 0], pts[0, 1])]
        rows += [("mixtures", float(x), float(y)) for x, y in pts[2:]]
        rows.append(("mixtures", 1.0, 0.0))
        for eps in np.linspace(0.0, 2 / d, n):
            c = covariant.covariant_family_state(d, float(eps)).coords
            rows.append(("family", c.x, c.y))
    return rows


def _negativity_at(x, y, d):
    return covariant.negativity(covariant.state_from_coords(covariant.CovariantCoords(x, y), d))


def negativity_rows(d: int, n: int = 200, levels=None):
    """Level sets of the negativity in the (<F>, <Fhat>) plane plus its profile
    along the covariant family (series ``family``, y = negativity)."""
    if levels is None:
        top = 1 / (d - 1)
        levels = [top * k / 5 for k in range(1, 5)]
    rows = []
    for level in levels:
        for y in np.linspace(0.0, d, n):
            lo = -1 + 2 * y / d  # left edge of the state triangle
            if _negativity_at(lo, y, d) < level:
                continue
            x = brentq(lambda t: _negativity_at(t, y, d) - level, lo, 1.0, xtol=1e-13)
            rows.append((f"level={level!r}", x, float(y)))
    for eps in np.linspace(0.0, 2 / d, n):
        st = covariant.covariant_family_state(d, float(eps))
        rows.append(("family", st.coords.x, covariant.negativity(st)))
    return rows


def two_copy_rows(n: int = 200):
    """(<F>, <F12>) plane at d = 3: reachable triangle, hull of the unitary points,
    the two-copy family (x, x^2) and the matching point at epsilon*."""
    rows = [("states", x, y) for x, y in [(1.0, 1.0), (-1.0, 1.0), (0.0, -1.0), (1.0, 1.0)]]
    thetas = np.linspace(0.0, np.pi / 2, n)
    hull = [(c.f, c.f12) for c in map(birkhoff.theta_curve, thetas)]
    hull += [(1 / 9, -7 / 9), (1.0, 1.0), hull[0]]
    rows += [("mixtures", x, y) for x, y in hull]
    for x in np.linspace(-1.0, 1.0, n):
        rows.append(("product", float(x), float(x * x)))
    c = birkhoff.family_two_copy_coords(birkhoff.epsilon_star())
    rows.append(("epsilon_star", c.f, c.f12))
    return rows


def figure_rows(name: str, d: int):
    if name == "covariant":
        return covariant_rows(d)
    if name == "negativity":
        return negativity_rows(d)
    if name == "two-copy":
        if d != 3:
            raise ValueError("the two-copy figure exists for d = 3 only")
        return two_copy_rows()
    raise ValueError(f"unknown figure {name!r}")


def figure_header(name: str):
    if name == "two-copy":
        return ("series", "x=<F>", "y=<F12>")
    if name == "negativity":
        return ("series", "x=<F>", "y=<Fhat> (family rows: negativity)")
    return ("series", "x=<F>", "y=<Fhat>")


def to_csv(name: str, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(figure_header(name))
    for s, x, y in rows:
        w.writerow((s, repr(float(x)), repr(float(y))))
    return buf.getvalue()
