"""Free-subgroup certification by quantitative flag dynamics.

The infinite inclusion "every high power maps this neighborhood into that
one" is replaced by a finite certificate: congruence balls of flags at an
exact valuation margin, a contraction inequality driven by the slope gaps,
and a seeded sampling falsifier.  Word checks on top are a necessary
freeness condition; `pass` means words and margins both certified.
"""

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .coxeter import euclidean_norm
from .errors import MarginInfeasible, WordCollision
from .infinity import ChamberAtInfinity, flags_opposite, u_cylinder_contains
from .isometry import (
    GroupElement,
    _eigen_data,
    attracting_flag,
    axis_vertex,
    cartan_projection,
)
from .lattices import standard_vertex
from .walks import independent_pair_check


def _cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _vp_content(vec, p):
    m = None
    for e in vec:
        if e != 0:
            v = kernels.vp_int(e, p)
            if m is None or v < m:
                m = v
    return m  # None encodes +infinity (zero vector)


def flag_proximity(f1: ChamberAtInfinity, f2: ChamberAtInfinity, p):
    """(line, plane) coincidence valuations; None marks equal components."""
    return (
        _vp_content(_cross(f1.line, f2.line), p),
        _vp_content(_cross(f1.plane, f2.plane), p),
    )


def in_margin_ball(f: ChamberAtInfinity, center: ChamberAtInfinity, m, p) -> bool:
    lv, pv = flag_proximity(f, center, p)
    return (lv is None or lv >= m) and (pv is None or pv >= m)


@dataclass(frozen=True)
class _Direction:
    """Exact eigen-data of one power direction g^{+1} or g^{-1}."""

    element: GroupElement
    attracting: ChamberAtInfinity
    repelling: ChamberAtInfinity
    gap_line: int
    gap_plane: int
    slack_line: int
    slack_plane: int

    def power_needed(self, m, tau_line, tau_plane):
        """Smallest n with both margin inequalities satisfied."""
        n1 = -(-(m + self.slack_line + tau_line) // self.gap_line)
        n2 = -(-(m + self.slack_plane + tau_plane) // self.gap_plane)
        return max(1, n1, n2)


def _direction_data(g: GroupElement) -> _Direction:
    p = g.p
    eigs, vecs = _eigen_data(g)
    e_cols = tuple(tuple(vecs[j][r] for j in range(3)) for r in range(3))
    adj, det = kernels.adj_det_int(e_cols)
    delta = kernels.vp_int(det, p)
    # integer eigenvalues of the integer matrix; valuations descend
    a = [kernels.vp_int(int(lam), p) for lam in eigs]
    rho1 = _vp_content(adj[0], p)
    rho3 = _vp_content(adj[2], p)
    att = ChamberAtInfinity(vecs[2], adj[0])
    rep = ChamberAtInfinity(vecs[0], adj[2])
    return _Direction(
        g,
        att,
        rep,
        gap_line=a[1] - a[2],
        gap_plane=a[0] - a[1],
        slack_line=delta + rho3,
        slack_plane=rho1,
    )


def _pair_directions(g1: GroupElement, g2: GroupElement):
    return (
        _direction_data(g1),
        _direction_data(g1.inverse()),
        _direction_data(g2),
        _direction_data(g2.inverse()),
    )


def _transversality(direction: _Direction, source: ChamberAtInfinity, p):
    """Pin valuations of a source flag against the repelling data."""
    dot1 = sum(a * b for a, b in zip(direction.repelling.plane, source.line))
    dot2 = sum(a * b for a, b in zip(direction.repelling.line, source.plane))
    tau_line = None if dot1 == 0 else kernels.vp_int(dot1, p)
    tau_plane = None if dot2 == 0 else kernels.vp_int(dot2, p)
    return tau_line, tau_plane


def minimal_margin(directions, p) -> int:
    """Smallest margin with all pins strict and the four balls disjoint.

    Each direction must map the three balls other than its repelling one;
    the repelling ball itself is exempt from the pin conditions.
    """
    finite = [0]
    flags = [d.attracting for d in directions]
    for i in range(4):
        for j in range(i + 1, 4):
            lv, pv = flag_proximity(flags[i], flags[j], p)
            if lv is None and pv is None:
                raise MarginInfeasible("two of the four flags coincide")
            sep = min(v for v in (lv, pv) if v is not None)
            finite.append(sep)
    for idx, d in enumerate(directions):
        for k, src in enumerate(flags):
            if k == (idx ^ 1):
                continue
            tl, tp = _transversality(d, src, p)
            if tl is None or tp is None:
                raise MarginInfeasible(
                    "a source flag is not transverse to a repelling flag"
                )
            finite.extend((tl, tp))
    return max(finite) + 1


def certify_power(directions, n, margin, p) -> bool:
    """Exact sufficient condition: every direction to the n-th power maps
    the three margin balls other than its repelling one into its
    attracting margin ball."""
    flags = [d.attracting for d in directions]
    for idx, d in enumerate(directions):
        for k, src in enumerate(flags):
            if k == (idx ^ 1):
                continue
            tl, tp = _transversality(d, src, p)
            if tl is None or tp is None or tl >= margin or tp >= margin:
                return False
            if n < d.power_needed(margin, tl, tp):
                return False
    return True


def pingpong_power(g1: GroupElement, g2: GroupElement, precision=None, margin=None):
    """Smallest power (doubling search) whose margin certificate holds.

    Returns (n, margin).  MarginInfeasible signals flags that are too close
    (or not pairwise opposite) at the requested margin.
    """
    try:
        independent_pair_check(g1, g2)
    except ValueError as exc:
        raise MarginInfeasible(str(exc)) from None
    p = g1.p
    directions = _pair_directions(g1, g2)
    auto = minimal_margin(directions, p)
    if margin is None:
        margin = auto
    elif margin < auto:
        raise MarginInfeasible(
            f"margin {margin} too small for this configuration (needs >= {auto})"
        )
    n = 1
    while n < 2 ** 30:
        if certify_power(directions, n, margin, p):
            return n, margin
        n *= 2
    raise MarginInfeasible("no certified power below the search cap")


def sample_ball_flag(center: ChamberAtInfinity, m, p, rng) -> ChamberAtInfinity:
    """Random flag in the margin-m congruence ball around a flag."""
    while True:
        b = [[int(rng.integers(-p, p + 1)) for _ in range(3)] for _ in range(3)]
        rows = tuple(
            tuple((1 if i == j else 0) + p ** m * b[i][j] for j in range(3))
            for i in range(3)
        )
        _, det = kernels.adj_det_int(rows)
        if det != 0:
            break
    line = kernels.mat_vec_int(rows, center.line)
    adj, _ = kernels.adj_det_int(rows)
    plane = tuple(sum(adj[r][i] * center.plane[r] for r in range(3)) for i in range(3))
    return ChamberAtInfinity(line, plane)


def sampling_falsifier(g1, g2, n, margin, trials=1000, seed=0):
    """Seeded Monte Carlo search for a counterexample flag.

    For each direction and source ball, random ball members are transported
    by the n-th power and the target margin is checked exactly.  Returns
    the number of counterexamples (0 for a sound certificate).
    """
    p = g1.p
    directions = _pair_directions(g1, g2)
    flags = [d.attracting for d in directions]
    bad = 0
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((int(seed), 7))))
    per = max(1, trials // 12)
    for idx, d in enumerate(directions):
        power = d.element ** n
        target = d.attracting
        for k, src in enumerate(flags):
            if k == (idx ^ 1):
                continue
            for _ in range(per):
                f = sample_ball_flag(src, margin, p, rng)
                image_line = kernels.mat_vec_int(power.rows, f.line)
                adjp, _ = kernels.adj_det_int(power.rows)
                image_plane = tuple(
                    sum(adjp[r][i] * f.plane[r] for r in range(3)) for i in range(3)
                )
                image = ChamberAtInfinity(image_line, image_plane)
                if not in_margin_ball(image, target, margin, p):
                    bad += 1
    return bad


def iter_reduced_words(letters, max_len):
    """Depth-first reduced words with incremental products.

    `letters` maps label -> (element, inverse_label).  Yields
    (word_string, element) for every nonempty reduced word of length at
    most max_len, in DFS order; a label never follows its own inverse.
    """
    labels = sorted(letters)

    def rec(word, last, elem, depth):
        for lab in labels:
            g, inv = letters[lab]
            if last == inv:
                continue
            nxt = elem * g if elem is not None else g
            yield word + lab, nxt
            if depth + 1 < max_len:
                yield from rec(word + lab, lab, nxt, depth + 1)

    if max_len > 0:
        yield from rec("", None, None, 0)


@dataclass
class PingPongCertificate:
    """Recorded evidence for freeness of the powered pair."""

    g1: GroupElement
    g2: GroupElement
    power: int
    margin: int
    word_check_depth: int
    flags: tuple
    cylinders: tuple
    word_counts: dict
    margin_certified: bool
    sampling: dict
    displacement: dict
    verdict: str

    def to_json(self):
        return {
            "schema": "pingpong-certificate-1",
            "p": self.g1.p,
            "g1": self.g1.to_json(),
            "g2": self.g2.to_json(),
            "power": self.power,
            "margin": self.margin,
            "word_check_depth": self.word_check_depth,
            "flags": {
                name: f.to_json() for name, f in zip(_FLAG_NAMES, self.flags)
            },
            "cylinders": [
                {
                    "basepoint": c[0].to_json(),
                    "direction_vertex": c[1].to_json(),
                    "flag": c[2].to_json(),
                }
                for c in self.cylinders
            ],
            "word_counts": {str(k): v for k, v in sorted(self.word_counts.items())},
            "margin_certified": self.margin_certified,
            "sampling": self.sampling,
            "displacement": self.displacement,
            "verdict": self.verdict,
        }

    def to_json_text(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


_FLAG_NAMES = ("c1_plus", "c1_minus", "c2_plus", "c2_minus")


def _word_survey(g1, g2, n, depth, p):
    """Exhaustive identity check over reduced words in the powered pair."""
    a = g1 ** n
    b = g2 ** n
    letters = {
        "a": (a, "A"),
        "A": (a.inverse(), "a"),
        "b": (b, "B"),
        "B": (b.inverse(), "b"),
    }
    counts = {}
    o = standard_vertex(p)
    grow_total = 0
    grow_ok = 0
    norms = {"": 0.0}
    for word, elem in iter_reduced_words(letters, depth):
        counts[len(word)] = counts.get(len(word), 0) + 1
        if elem.is_scalar():
            raise WordCollision(word)
        nrm = euclidean_norm(cartan_projection(elem, o))
        norms[word] = nrm
        grow_total += 1
        if nrm > norms[word[:-1]]:
            grow_ok += 1
    return counts, {"prefix_steps": grow_total, "strictly_increasing": grow_ok}


def free_group_certificate(
    g1: GroupElement,
    g2: GroupElement,
    power=None,
    word_depth=8,
    margin=None,
    precision=None,
    sampling_trials=1000,
    sampling_seed=0,
) -> PingPongCertificate:
    """Assemble and check a freeness certificate for (g1^N, g2^N).

    Raises WordCollision if some reduced word of length <= word_depth acts
    as the identity.  The verdict is `pass` only when the word survey is
    clean and the margin certificate holds at the recorded power.
    """
    p = g1.p
    directions = _pair_directions(g1, g2)
    flags = tuple(d.attracting for d in directions)
    pairwise = all(
        flags_opposite(flags[i], flags[j]) for i in range(4) for j in range(i + 1, 4)
    )
    certified = False
    m = margin if margin is not None else 1
    if pairwise:
        auto = minimal_margin(directions, p)
        m = margin if margin is not None else auto
        if m < auto:
            raise MarginInfeasible(
                f"margin {m} too small for this configuration (needs >= {auto})"
            )
        if power is None:
            n, m = pingpong_power(g1, g2, precision, m)
            certified = True
        else:
            n = int(power)
            certified = certify_power(directions, n, m, p)
    else:
        if power is None:
            raise MarginInfeasible(
                "flags are not pairwise opposite; supply an explicit power "
                "to run the word survey anyway"
            )
        n = int(power)
    counts, growth = _word_survey(g1, g2, n, word_depth, p)
    cylinders = []
    for d, flag in zip(directions, flags):
        o = axis_vertex(d.element)
        y = (d.element ** n).apply(o)
        assert u_cylinder_contains(o, y, flag)
        cylinders.append((o, y, flag))
    if certified:
        bad = sampling_falsifier(g1, g2, n, m, sampling_trials, sampling_seed)
    else:
        bad = None
    verdict = "pass" if certified and bad == 0 else "unverified"
    return PingPongCertificate(
        g1=g1,
        g2=g2,
        power=n,
        margin=m,
        word_check_depth=word_depth,
        flags=flags,
        cylinders=tuple(cylinders),
        word_counts=counts,
        margin_certified=certified,
        sampling={
            "trials": sampling_trials,
            "seed": sampling_seed,
            "counterexamples": bad,
        },
        displacement=growth,
        verdict=verdict,
    )


def verify_certificate(data) -> str:
    """Re-verify a serialized certificate from its own data alone.

    Returns "pass", "refuted" (tampered or word collision) or
    "inconclusive" (margins not certified at the recorded power).
    """
    try:
        p = int(data["p"])
        g1 = GroupElement.from_matrix(data["g1"], p)
        g2 = GroupElement.from_matrix(data["g2"], p)
        n = int(data["power"])
        m = int(data["margin"])
        depth = int(data["word_check_depth"])
    except (KeyError, ValueError, TypeError):
        return "refuted"
    try:
        fresh = free_group_certificate(
            g1,
            g2,
            power=n,
            word_depth=depth,
            margin=m,
            sampling_trials=int(data.get("sampling", {}).get("trials", 1000)),
            sampling_seed=int(data.get("sampling", {}).get("seed", 0)),
        )
    except WordCollision:
        return "refuted"
    except MarginInfeasible:
        return "refuted"
    recorded = dict(data)
    recomputed = fresh.to_json()
    for key in ("flags", "cylinders", "word_counts", "margin_certified", "verdict"):
        if recorded.get(key) != recomputed.get(key):
            return "refuted"
    return "pass" if fresh.verdict == "pass" else "inconclusive"
