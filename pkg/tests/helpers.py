"""Small constructors shared by the test modules."""
from __future__ import annotations

from spherica.lattice import normal_form
from spherica.roots import build_root_datum
from spherica.spherical import ColorRecord, PSphericalSystem, rebase_delta


def make_system(group, p, rows, sigma, sp, colors, **kw) -> PSphericalSystem:
    """colors: (name, type, moved_by, delta values on ``rows``, q map)."""
    rd = build_root_datum(group)
    rows = [tuple(r) for r in rows]
    xi = normal_form(rows, rd.rank)
    recs = tuple(ColorRecord(n, t, tuple(rd.resolve(a) for a in m), rebase_delta(xi, rows, d),
                             {rd.resolve(a): v for a, v in q.items()}) for n, t, m, d, q in colors)
    return PSphericalSystem(p=p, rd=rd, xi=xi, sigma=tuple(map(tuple, sigma)), sp=tuple(rd.resolve(a) for a in sp),
                            colors=recs, group=group, **kw)


def roots_on(rd, rows, i):
    """Values of the coroot ``i`` on the given rows."""
    return [rd.pairing(r, i) for r in rows]
