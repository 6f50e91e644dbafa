"""Executable checks of the coarse-geometry statements over a corpus.

Every suite yields :class:`SuiteResult` records.  ``slack`` is the worst-case
margin of the checked inequality (negative means violated).  ``hard`` results
decide the exit status of :func:`run_all`; soft ones are recorded
measurements whose bound is only known to exist, checked by same-family
boundedness.

Tolerances in :class:`VerifyConfig` are in unscaled units and multiplied by
the scale of each instance.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations, islice
from typing import Any, Callable, Iterator

import numpy as np

from ..errors import BadParams, BudgetExceeded, InjhullError, NotHelly
from ..helly import helly_oracle, is_helly, tripod
from ..invariants import (
    _json_value,
    bounded_jump_check,
    contraction_constant,
    gromov_delta,
    local_contraction_scan,
    morse_constant,
    projection_matrix,
)
from ..metric import (
    DiscretePath,
    FiniteMetricSpace,
    enumerate_quasi_geodesics,
    geodesic_path,
    is_quasi_geodesic,
    quasi_geodesic_slack,
)
from .corpus import Corpus, Instance

PASS, FAIL, VACUOUS = "pass", "fail", "vacuous"


@dataclass
class VerifyConfig:
    slack: int = 1  # projection slack
    tol: int = 2  # per geodesic substitution
    tol_main: int = 12  # whole chain of the contraction bound
    morse_budget: int = 200_000
    seed: int = 0
    suites: tuple | None = None
    concat_max_n: int = 60
    concat_qg_samples: int = 3
    helly_oracle_max_n: int = 8
    tripod_full_max_n: int = 20
    ltg_D: int = 2
    ltg_qg_samples: int = 3
    qg_budget: int = 20_000

    def to_json(self) -> dict[str, Any]:
        d = asdict(self)
        d["suites"] = None if self.suites is None else list(self.suites)
        return d


@dataclass
class SuiteResult:
    suite: str
    instance: str
    subset: str | None
    measured: dict
    slack: Any
    witnesses: dict
    status: str
    hard: bool = True

    def to_json(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "instance": self.instance,
            "subset": self.subset,
            "measured": _json_value(self.measured),
            "slack": _json_value(self.slack),
            "witnesses": _json_value(self.witnesses),
            "status": self.status,
            "hard": self.hard,
        }


def _status(slack) -> str:
    return PASS if slack >= 0 else FAIL


def _result(suite, inst, sub, measured, slack, witnesses, hard=True) -> SuiteResult:
    return SuiteResult(suite, inst.id, None if sub is None else sub.name, measured, slack,
                       witnesses, _status(slack), hard)


def _vacuous(suite, inst, sub, reason, hard=True, measured=None) -> SuiteResult:
    return SuiteResult(suite, inst.id, None if sub is None else sub.name, measured or {}, None,
                       {"reason": reason}, VACUOUS, hard)


def _is_all(inst: Instance, Y) -> bool:
    return len(set(Y)) == inst.n


# --------------------------------------------------------------------------
# shared measurements


def _morse(inst: Instance, sub, lam, eps, cfg: VerifyConfig):
    cache = inst.extras.setdefault("morse", {})
    key = (sub.name, str(lam), str(eps), cfg.morse_budget)
    if key not in cache:
        cache[key] = morse_constant(inst.space, sub.members, lam, eps, cfg.morse_budget)
    return cache[key]


def _contraction(inst: Instance, sub, cfg: VerifyConfig):
    cache = inst.extras.setdefault("contraction", {})
    key = (sub.name, cfg.slack)
    if key not in cache:
        cache[key] = contraction_constant(inst.space, sub.members, cfg.slack * inst.space.scale)
    return cache[key]


def _unit_neighbors(X: FiniteMetricSpace) -> list[np.ndarray]:
    return [np.flatnonzero(X.dist[v] == X.scale) for v in range(X.n)]


def maximin_to(X: FiniteMetricSpace, z: int, targets, nbrs=None) -> np.ndarray:
    """``V[v, k]`` = max over unit-step geodesics alpha from v to z of d(targets[k], alpha).

    Every unit step that lowers the distance to z by one unit lies on a
    geodesic to z, so one pass in order of distance to z covers all geodesics.
    """
    nbrs = _unit_neighbors(X) if nbrs is None else nbrs
    T = list(targets)
    dz = X.dist[:, z]
    V = np.empty((X.n, len(T)), dtype=np.int64)
    for v in np.argsort(dz, kind="stable"):
        own = X.dist[v, T]
        if v == z:
            V[v] = own
            continue
        succ = nbrs[v][dz[nbrs[v]] == dz[v] - X.scale]
        V[v] = np.minimum(own, V[succ].max(axis=0))
    return V


def geodesic_projection_gap(X: FiniteMetricSpace, Y, slack: int):
    """max over x, y in the projection of x, z in Y, geodesics alpha from x to z of d(y, alpha).

    Returns (value, witness dict).
    """
    Y = list(Y)
    P = projection_matrix(X, Y, slack)
    nbrs = _unit_neighbors(X)
    best, wit = -1, None
    for kz, z in enumerate(Y):
        V = maximin_to(X, z, Y, nbrs)
        V = np.where(P, V, -1)
        x, ky = np.unravel_index(int(np.argmax(V)), V.shape)
        if V[x, ky] > best:
            best, wit = int(V[x, ky]), {"x": int(x), "y": Y[ky], "z": z}
    return best, wit


def _family_bounded(values: list[tuple[int, Any]]):
    """Margin of the boundedness test on a size-ordered family.

    Passes when the upper half stays within the max over the lower half, or
    when the upper half is a plateau (constant values).
    """
    vals = [v for _, v in sorted(values)]
    if len(vals) < 2:
        return None
    h = len(vals) // 2
    lower, upper = max(vals[:h]), max(vals[h:])
    if len(set(vals[h:])) == 1 and len(vals[h:]) >= 2:
        return max(lower - upper, 0)
    return lower - upper


def _family_summary(suite, family, rows, key, hard, constant=False, control=None) -> SuiteResult:
    """rows: list of (size, value, instance id).

    ``control`` maps instance ids to the parameter the bound depends on; if it
    grows across the family the boundedness claim does not apply.
    """
    pairs = [(s, v) for s, v, _ in rows]
    measured = {key: [[iid, s, v] for s, v, iid in sorted(rows)]}
    inst_id = f"family:{family}"
    if control is not None:
        measured["control"] = [[iid, control[iid]] for _, _, iid in sorted(rows)]
        grows = _family_bounded([(s, control[iid]) for s, _, iid in rows])
        if grows is not None and grows < 0:
            return SuiteResult(suite, inst_id, None, measured, None,
                               {"reason": "controlling constant grows with size"}, VACUOUS, hard)
    if constant:
        vals = {v for _, v in pairs}
        if len(pairs) < 2:
            slack = None
        else:
            slack = 0 if len(vals) == 1 else -(max(vals) - min(vals))
    else:
        slack = _family_bounded(pairs)
    if slack is None:
        return SuiteResult(suite, inst_id, None, measured, None, {"reason": "fewer than two sizes"},
                           VACUOUS, hard)
    wit = {}
    if slack < 0:
        worst = max(rows, key=lambda r: (r[1], r[0]))
        wit = {"instance": worst[2], "size": worst[0], key: worst[1]}
    return SuiteResult(suite, inst_id, None, measured, slack, wit, _status(slack), hard)


# --------------------------------------------------------------------------
# suites


def suite_projection_geodesic(corpus: Corpus, cfg: VerifyConfig) -> Iterator[SuiteResult]:
    """d(p, y) <= d(p, Y) + slack for y in the projection of x and p on any geodesic [x, y]."""
    for inst in corpus:
        X = inst.space
        s = cfg.slack * X.scale
        for sub in inst.subsets:
            Y = list(sub.members)
            if _is_all(inst, Y):
                yield _vacuous("projection_geodesic", inst, sub, "Y is the whole space")
                continue
            P = projection_matrix(X, Y, s)
            dY = X.dist[:, Y].min(axis=1)
            worst, wit = None, None
            for x in range(X.n):
                for k in np.flatnonzero(P[x]):
                    y = Y[k]
                    on = X.dist[x] + X.dist[:, y] == X.dist[x, y]
                    margin = dY + s - X.dist[:, y]
                    margin = np.where(on, margin, np.iinfo(np.int64).max)
                    p = int(np.argmin(margin))
                    if worst is None or margin[p] < worst:
                        worst, wit = int(margin[p]), {"x": x, "y": y, "p": p}
            yield _result("projection_geodesic", inst, sub, {"min_margin": worst}, worst, wit)


def _sample_paths(inst: Instance, sub, cfg: VerifyConfig):
    """Designated geodesic plus the first few (2,0)-quasi-geodesics between its ends."""
    out = [("designated", DiscretePath(sub.path, 1, 0))]
    a, b = sub.path[0], sub.path[-1]
    if a != b:
        try:
            for i, qg in enumerate(islice(enumerate_quasi_geodesics(inst.space, a, b, 2, 0, cfg.qg_budget),
                                          cfg.concat_qg_samples)):
                out.append((f"qg2_{i}", qg))
        except BudgetExceeded:
            pass
    return out


def suite_concatenation(corpus: Corpus, cfg: VerifyConfig) -> Iterator[SuiteResult]:
    """[x, y] followed by beta from y to z is a (3q, Q + 2)-quasi-geodesic for y closest to x."""
    for inst in corpus:
        X = inst.space
        for sub in inst.subsets:
            if sub.path is None or len(sub.path) < 2:
                continue
            if X.n > cfg.concat_max_n:
                yield _vacuous("concatenation", inst, sub, f"n > {cfg.concat_max_n}")
                continue
            geo_cache: dict = {}
            for label, beta in _sample_paths(inst, sub, cfg):
                pts = beta.points
                lam, eps = 3 * beta.lam, beta.eps + cfg.tol
                dB = X.dist[:, list(pts)].min(axis=1)
                worst, wit = None, None
                for x in range(X.n):
                    for i, y in enumerate(pts):
                        if X.dist[x, y] != dB[x]:
                            continue
                        if (x, y) not in geo_cache:
                            geo_cache[x, y] = geodesic_path(X, x, y)
                        g = geo_cache[x, y]
                        for j in range(len(pts)):
                            tail = pts[i : j + 1] if j >= i else pts[j : i + 1][::-1]
                            path = g + tuple(tail[1:])
                            sl = quasi_geodesic_slack(X, path, lam, eps)
                            if worst is None or sl < worst:
                                worst, wit = sl, {"x": x, "y": y, "z": pts[j], "path": list(path),
                                                  "lambda": lam, "eps": eps}
                r = _result("concatenation", inst, sub,
                            {"path": label, "q": beta.lam, "Q": beta.eps, "min_slack": worst},
                            worst, wit)
                r.subset = f"{sub.name}/{label}"
                yield r


def suite_one_geodesic(corpus: Corpus, cfg: VerifyConfig, helly_only: bool = True) -> Iterator[SuiteResult]:
    """d(x, z) >= d(x, y) + d(y, z) - 2 M(1,0) - 2 - tol for y in the projection of x, z in Y."""
    for inst in corpus:
        if helly_only and not inst.helly:
            continue
        X = inst.space
        Q = X.scale
        for sub in inst.subsets:
            Y = list(sub.members)
            if _is_all(inst, Y):
                yield _vacuous("one_geodesic", inst, sub, "Y is the whole space")
                continue
            M = _morse(inst, sub, 1, 0, cfg)
            allow = 2 * M.constant + 2 * cfg.slack * Q + cfg.tol * Q
            P = projection_matrix(X, Y, cfg.slack * Q)
            DYY = X.dist[np.ix_(Y, Y)]
            worst, wit = None, None
            for x in range(X.n):
                ks = np.flatnonzero(P[x])
                # rows: y in projection, cols: z in Y
                m = X.dist[x, Y][None, :] - X.dist[x, Y][ks][:, None] - DYY[ks] + allow
                i, j = np.unravel_index(int(np.argmin(m)), m.shape)
                if worst is None or m[i, j] < worst:
                    worst, wit = int(m[i, j]), {"x": x, "y": Y[ks[i]], "z": Y[j]}
            wit["morse_1_0"] = M.constant
            wit["morse_exact"] = M.exact
            yield _result("one_geodesic", inst, sub, {"M_1_0": M.constant, "allowance": allow,
                                                      "min_margin": worst}, worst, wit)


def suite_all_geodesics(corpus: Corpus, cfg: VerifyConfig) -> Iterator[SuiteResult]:
    """d(y, alpha) <= 2 M(9,0) + 2 M(1,0) + 2 + tol for every geodesic alpha from x to z in Y."""
    for inst in corpus:
        if not inst.helly:
            continue
        X = inst.space
        Q = X.scale
        for sub in inst.subsets:
            Y = list(sub.members)
            if _is_all(inst, Y):
                yield _vacuous("all_geodesics", inst, sub, "Y is the whole space", measured={"C": 0})
                continue
            M1 = _morse(inst, sub, 1, 0, cfg)
            M9 = _morse(inst, sub, 9, 0, cfg)
            C, wit = geodesic_projection_gap(X, Y, cfg.slack * Q)
            bound = 2 * M9.constant + 2 * M1.constant + 2 * Q + cfg.tol * Q
            wit.update(morse_exact=M1.exact and M9.exact)
            yield _result("all_geodesics", inst, sub,
                          {"C": C, "M_9_0": M9.constant, "M_1_0": M1.constant, "bound": bound},
                          bound - C, wit)


def suite_morse_iff_contracting(corpus: Corpus, cfg: VerifyConfig, table: list | None = None):
    """D <= 6 (2 K9 + 2 M1 + 2) + tol_main on Helly instances, with the (D, K9) record."""
    for inst in corpus:
        if not inst.helly:
            continue
        X = inst.space
        Q = X.scale
        for sub in inst.subsets:
            Y = list(sub.members)
            if _is_all(inst, Y):
                r = _vacuous("morse_iff_contracting", inst, sub, "Y is the whole space",
                             measured={"D": 0, "K_9_0": 0})
                yield r
                continue
            K9 = _morse(inst, sub, 9, 0, cfg)
            M1 = _morse(inst, sub, 1, 0, cfg)
            D = _contraction(inst, sub, cfg)
            bound = 6 * (2 * K9.constant + 2 * M1.constant + 2 * Q) + cfg.tol_main * Q
            if table is not None:
                table.append({"instance": inst.id, "family": inst.family, "size": inst.size,
                              "subset": sub.name, "D": D.constant, "K_9_0": K9.constant,
                              "M_1_0": M1.constant, "scale": Q, "exact": K9.exact and M1.exact})
            wit = D.to_json()["witnesses"]
            wit.update(morse_9_0=K9.to_json()["witnesses"], morse_exact=K9.exact and M1.exact)
            yield _result("morse_iff_contracting", inst, sub,
                          {"D": D.constant, "K_9_0": K9.constant, "M_1_0": M1.constant, "bound": bound},
                          bound - D.constant, wit)


def _hard_for(inst: Instance) -> bool:
    return inst.helly or inst.is_tree


def suite_bounded_jumps(corpus: Corpus, cfg: VerifyConfig) -> Iterator[SuiteResult]:
    """Split designated paths at every interior point and check bounded jumps at every x.

    D is the larger contraction constant of the two pieces and B_meas the
    contraction constant of the whole path; the check uses D' = D + B_meas + tol.
    The least D' that would pass is recorded as ``D_prime_min``.
    """
    for inst in corpus:
        X = inst.space
        Q = X.scale
        s = cfg.slack * Q
        for sub in inst.subsets:
            if sub.path is None or len(sub.path) < 3:
                continue
            pts = sub.path
            B = contraction_constant(X, pts, s).constant
            worst, wit, dmax, need = None, None, 0, 0
            for j in range(1, len(pts) - 1):
                g1, g2 = DiscretePath(pts[: j + 1]), DiscretePath(pts[j:])
                D = max(contraction_constant(X, g1.support(), s).constant,
                        contraction_constant(X, g2.support(), s).constant)
                dmax = max(dmax, D)
                Dp = D + B + cfg.tol * Q
                for a, b in ((g1, g2), (g2.reversed(), g1.reversed())):
                    for x in range(X.n):
                        ok, info = bounded_jump_check(X, a, b, x, Dp, s)
                        # least D' passing at x: antecedent false or consequent true
                        need = max(need, min(info["d_pi1_p"] + 1, info["max_d_pi2_p"]))
                        margin = Dp - info["max_d_pi2_p"] if not info["vacuous"] else Dp
                        if not ok:
                            margin = min(margin, -1)
                        if worst is None or margin < worst:
                            worst = margin
                            wit = dict(info, split=j, Dprime=Dp, gamma1=list(a.points), gamma2=list(b.points))
            yield _result("bounded_jumps", inst, sub,
                          {"D": dmax, "B_meas": B, "D_prime_min": need, "min_margin": worst},
                          worst, wit, hard=_hard_for(inst))


def _ltg_candidates(inst: Instance, sub, cfg: VerifyConfig):
    out = [(sub.name, DiscretePath(sub.path, 1, 0))]
    a, b = sub.path[0], sub.path[-1]
    try:
        gen = enumerate_quasi_geodesics(inst.space, a, b, 2, 0, cfg.qg_budget)
        for i, qg in enumerate(islice(gen, cfg.ltg_qg_samples)):
            out.append((f"{sub.name}/qg2_{i}", qg))
    except BudgetExceeded:
        pass
    return out


def suite_local_to_global(corpus: Corpus, cfg: VerifyConfig, table: list | None = None):
    """Sweep the window length L for locally contracting paths; record the threshold L*.

    L* is the least L such that local (L; D; k, c)-contraction at any L' >= L
    implies the whole path is a (k, c)-quasi-geodesic with contraction <= D + tol.
    Families record max L*; for trees it must not grow with size.
    """
    fam_rows: dict = {}
    for inst in corpus:
        X = inst.space
        Q = X.scale
        D = cfg.ltg_D * Q
        for sub in inst.subsets:
            if sub.path is None or len(sub.path) < 2:
                continue
            for name, path in _ltg_candidates(inst, sub, cfg):
                L_len = len(path.points) - 1
                cache: dict = {}
                local_ok = [local_contraction_scan(X, path, L, D, path.lam, path.eps, cfg.slack * Q, cache)[0]
                            for L in range(1, L_len + 1)]
                qg_ok = is_quasi_geodesic(X, path)[0]
                glob = contraction_constant(X, path.support(), cfg.slack * Q).constant
                global_ok = qg_ok and glob <= D + cfg.tol * Q
                L0 = max([L for L, ok in zip(range(1, L_len + 1), local_ok) if ok], default=0)
                Lstar = 1 if global_ok else L0 + 1
                c_glob = max(Fraction(0), -quasi_geodesic_slack(X, path.points, path.lam, 0))
                # the scan at full length sees the whole path, so L* never exceeds the length
                margin = L_len - Lstar
                row = {"instance": inst.id, "family": inst.family, "size": inst.size, "path": name,
                       "length": L_len, "L_star": Lstar, "k": path.lam, "c": path.eps,
                       "k_prime": path.lam, "c_prime": c_glob, "global_contraction": glob,
                       "locally_ok_up_to": L0}
                if table is not None:
                    table.append(row)
                fam_rows.setdefault(inst.family, []).append((inst.size, Lstar, inst.id))
                r = _result("local_to_global", inst, sub, row, margin,
                            {"path": list(path.points), "D": D}, hard=True)
                r.subset = name
                yield r
    for fam, rows in sorted(fam_rows.items()):
        by_size: dict = {}
        for s, v, iid in rows:
            if by_size.get(s, (-1,))[0] < v:
                by_size[s] = (v, iid)
        agg = [(s, v, iid) for s, (v, iid) in by_size.items()]
        tree = all(corpus.by_id(iid).is_tree for _, _, iid in rows)
        yield _family_summary("local_to_global", fam, agg, "L_star", hard=tree)


def _hull_pairs(corpus: Corpus):
    """(base instance, hull instance) pairs present in the corpus."""
    for inst in corpus:
        if "hull" in inst.tags:
            continue
        hid = f"hull({inst.id})"
        try:
            h = corpus.by_id(hid)
        except KeyError:
            continue
        yield inst, h


def _hull_subsets(base: Instance, h: Instance):
    return list(zip(base.subsets, h.subsets))


def _geodesic_subset(sub) -> bool:
    return sub.path is not None and set(sub.path) == set(sub.members)


def _hull_C(base: Instance, sub, cfg: VerifyConfig) -> int:
    """max(contraction constant, 4-point constant of A) in the base space."""
    cache = base.extras.setdefault("hull_C", {})
    if sub.name not in cache:
        A = list(sub.members)
        cache[sub.name] = max(_contraction(base, sub, cfg).constant,
                              gromov_delta(base.space, A).delta if len(A) >= 4 else 0)
    return cache[sub.name]


def _family_results(suite, corpus, fam_rows, key, control, exact_trees=False, hard_trees=True):
    """One summary per (family, subset); hard only for tree families with geodesic subsets."""
    for (fam, name), rows in sorted(fam_rows.items()):
        insts = [corpus.by_id(iid) for _, _, iid in rows]
        tree = all(i.is_tree for i in insts) and all(
            _geodesic_subset(next(s for s in i.subsets if s.name == name)) for i in insts)
        fixed = len({control[iid] for _, _, iid in rows}) == 1
        r = _family_summary(suite, fam, rows, key, hard=hard_trees and tree,
                            constant=exact_trees and tree and fixed, control=control)
        r.subset = name
        yield r


def suite_hull_quasiconvexity(corpus: Corpus, cfg: VerifyConfig, family_D: dict | None = None):
    """Hull geodesics between points of e(A) stay within D_meas of e(A)."""
    fam_rows: dict = {}
    control: dict = {}
    for base, h in _hull_pairs(corpus):
        H = h.space
        for sb, sh in _hull_subsets(base, h):
            EA = list(sh.members)
            C = _hull_C(base, sb, cfg)
            dE = H.dist[:, EA].min(axis=1)
            Dm, wit = 0, {}
            for a in EA:
                on = H.dist[a][None, :] + H.dist[EA] == H.dist[a, EA][:, None]
                vals = np.where(on, dE[None, :], -1)
                kb, v = np.unravel_index(int(np.argmax(vals)), vals.shape)
                if vals[kb, v] > Dm:
                    Dm, wit = int(vals[kb, v]), {"a": a, "b": EA[kb], "point": int(v)}
            fam_rows.setdefault((base.family, sb.name), []).append((base.size, Dm, h.id))
            control[h.id] = C
            if family_D is not None:
                key = (base.family, sb.name)
                family_D[key] = max(family_D.get(key, 0), Dm)
            measured = {"C": C, "D_meas": Dm}
            if base.is_tree and _geodesic_subset(sb):
                yield _result("hull_quasiconvexity", h, sh, measured, -Dm, wit)
            else:
                yield SuiteResult("hull_quasiconvexity", h.id, sh.name, measured, None, wit, PASS, hard=False)
    yield from _family_results("hull_quasiconvexity", corpus, fam_rows, "D_meas", control)


def suite_hull_reverse_triangle(corpus: Corpus, cfg: VerifyConfig, family_D: dict):
    """d(x, b) >= d(x, a) + d(a, b) - D for a in the projection of x to e(A), b in e(A)."""
    for base, h in _hull_pairs(corpus):
        H = h.space
        Q = H.scale
        for sb, sh in _hull_subsets(base, h):
            EA = list(sh.members)
            P = projection_matrix(H, EA, cfg.slack * Q)
            DAA = H.dist[np.ix_(EA, EA)]
            Drt, wit = 0, {}
            for x in range(H.n):
                ks = np.flatnonzero(P[x])
                m = H.dist[x, EA][ks][:, None] + DAA[ks] - H.dist[x, EA][None, :]
                i, j = np.unravel_index(int(np.argmax(m)), m.shape)
                if m[i, j] > Drt:
                    Drt, wit = int(m[i, j]), {"x": x, "a": EA[ks[i]], "b": EA[j]}
            allow = family_D.get((base.family, sb.name), 0) + cfg.tol * Q
            yield _result("hull_reverse_triangle", h, sh, {"D_rt": Drt, "allowance": allow},
                          allow - Drt, wit, hard=base.is_tree and _geodesic_subset(sb))


def suite_hull_geodesics_near_projection(corpus: Corpus, cfg: VerifyConfig):
    """Hull geodesics from f to b in e(A) pass near every a in the projection of f."""
    fam_rows: dict = {}
    control: dict = {}
    for base, h in _hull_pairs(corpus):
        H = h.space
        for sb, sh in _hull_subsets(base, h):
            D, wit = geodesic_projection_gap(H, sh.members, cfg.slack * H.scale)
            fam_rows.setdefault((base.family, sb.name), []).append((base.size, D, h.id))
            control[h.id] = _hull_C(base, sb, cfg)
            if base.is_tree and _geodesic_subset(sb):
                yield _result("hull_geodesics_near_projection", h, sh, {"D": D},
                              cfg.slack * H.scale - D, wit)
            else:
                yield SuiteResult("hull_geodesics_near_projection", h.id, sh.name, {"D": D}, None, wit,
                                  PASS, hard=False)
    yield from _family_results("hull_geodesics_near_projection", corpus, fam_rows, "D", control,
                               hard_trees=False)


def _contraction_defect(H: FiniteMetricSpace, EA, slack):
    """Least C' with d(x,y) >= d(x,x') + d(x',y') + d(y',y) - C' whenever d(x',y') >= C'."""
    P = projection_matrix(H, EA, slack)
    xs, ks = np.nonzero(P)
    xp = np.asarray(EA)[ks]
    sep = H.dist[np.ix_(xp, xp)]
    defect = (H.dist[xs, xp][:, None] + sep + H.dist[xp, xs][None, :] - H.dist[np.ix_(xs, xs)])
    for C in range(int(sep.max()) + 2):
        bad = (sep >= C) & (defect > C)
        if not bad.any():
            return C
    return int(defect.max())


def _delta_with_pairs(H: FiniteMetricSpace, EA):
    """max over x, y of the 4-point constant of e(A) + {x, y}."""
    EA = sorted(EA)
    best = gromov_delta(H, EA).delta if len(EA) >= 4 else 0
    wit = None
    inA = set(EA)
    for x, y in combinations(range(H.n), 2):
        if x in inA and y in inA:
            continue
        S = sorted(inA | {x, y})
        if len(S) < 4:
            continue
        rep = gromov_delta(H, S)
        if rep.delta > best:
            best, wit = rep.delta, {"x": x, "y": y, "quadruple": list(rep.quadruple)}
    return best, wit


def suite_persistence(corpus: Corpus, cfg: VerifyConfig):
    """Contraction of e(A) in the hull, the added-points 4-point constant and the defect C'."""
    fam_rows: dict = {}
    control: dict = {}
    for base, h in _hull_pairs(corpus):
        H = h.space
        for sb, sh in _hull_subsets(base, h):
            if not sb.contracting:
                yield _vacuous("persistence", h, sh, "designated subset is not known to be contracting")
                continue
            DX = _contraction(base, sb, cfg).constant
            DH_rep = _contraction(h, sh, cfg)
            DH = DH_rep.constant
            EA = list(sh.members)
            dA = gromov_delta(H, EA).delta if len(EA) >= 4 else 0
            dmeas, dwit = _delta_with_pairs(H, EA)
            Cp = _contraction_defect(H, EA, cfg.slack * H.scale)
            measured = {"D_X": DX, "D_hull": DH, "delta_A": dA, "delta_added": dmeas, "C_prime": Cp}
            wit = {"contraction": DH_rep.to_json()["witnesses"], "delta_added": dwit}
            fam_rows.setdefault((base.family, sb.name), []).append((base.size, DH, h.id))
            control[h.id] = _hull_C(base, sb, cfg)
            if base.is_tree and _geodesic_subset(sb):
                yield _result("persistence", h, sh, measured, -abs(DH - DX), wit)
            else:
                yield SuiteResult("persistence", h.id, sh.name, measured, None, wit, PASS, hard=False)
    yield from _family_results("persistence", corpus, fam_rows, "D_hull", control, exact_trees=True)


def suite_density(corpus: Corpus, cfg: VerifyConfig, table: list | None = None):
    """h = max over hull vertices of the distance to the embedded copy of X."""
    fam_rows: dict = {}
    control: dict = {}
    for base, h in _hull_pairs(corpus):
        H = h.space
        Q = H.scale
        hull = base.get_hull()
        emb = list(hull.embedding)
        dE = H.dist[:, emb].min(axis=1)
        hval = int(dE.max())
        f = int(np.argmax(dE))
        delta = gromov_delta(base.space).delta if base.n >= 4 else 0
        if table is not None:
            table.append({"instance": base.id, "family": base.family, "size": base.size,
                          "delta": delta, "h": hval, "scale": Q})
        fam_rows.setdefault(base.family, []).append((base.size, hval, h.id))
        control[h.id] = delta
        wit = {"form": list(hull.forms[f]), "vertex": f}
        measured = {"delta": delta, "h": hval}
        if base.is_tree:
            yield _result("density", h, None, measured, -hval, wit)
        elif "cycle" in base.tags:
            yield _result("density", h, None, measured, delta + cfg.tol * Q - hval, wit)
        else:
            yield SuiteResult("density", h.id, None, measured, None, wit, PASS, hard=False)
    for fam, rows in sorted(fam_rows.items()):
        yield _family_summary("density", fam, rows, "h", hard=False, control=control)


def suite_hull_identities(corpus: Corpus, cfg: VerifyConfig):
    """Exact identities of the integer hull: f(x) = dinf(e(x), f), membership, tightness, isometry."""
    for base, h in _hull_pairs(corpus):
        X = base.space
        hull = base.get_hull()
        F = np.array(hull.forms, dtype=np.int64)
        D = X.dist
        # dinf(e(x), f) for all forms and x
        dinf_e = np.abs(F[:, None, :] - D[None, :, :]).max(axis=2)
        bad_id = np.argwhere(dinf_e != F)
        cone = F[:, :, None] + F[:, None, :] >= D[None]
        lip = np.abs(F[:, :, None] - F[:, None, :]) <= D[None]
        tight = (F[:, :, None] + F[:, None, :] <= D[None]).any(axis=2)
        emb = list(hull.embedding)
        iso = np.array_equal(h.space.dist[np.ix_(emb, emb)], D)
        checks = {
            "kuratowski_distance": not len(bad_id),
            "in_delta": bool(cone.all()),
            "one_lipschitz": bool(lip.all()),
            "tight": bool(tight.all()),
            "embedding_isometric": iso,
        }
        if base.is_tree:
            checks["tree_hull_is_tree"] = hull.n == base.n
        wit = {}
        if len(bad_id):
            wit["kuratowski_distance"] = {"form": int(bad_id[0][0]), "x": int(bad_id[0][1])}
        for name, arr in (("in_delta", cone), ("one_lipschitz", lip)):
            if not arr.all():
                i, x, y = np.argwhere(~arr)[0]
                wit[name] = {"form": int(i), "x": int(x), "y": int(y)}
        if not tight.all():
            i, x = np.argwhere(~tight)[0]
            wit["tight"] = {"form": int(i), "x": int(x)}
        failed = sorted(k for k, v in checks.items() if not v)
        slack = -len(failed)
        yield SuiteResult("hull_identities", h.id, None, {"forms": hull.n, "checks": checks}, slack,
                          wit, _status(slack), True)


def suite_helly(corpus: Corpus, cfg: VerifyConfig):
    """Triple criterion against the exhaustive oracle, hull outputs, and claimed Helly instances."""
    for inst in corpus:
        if inst.graph is None:
            continue
        ok, balls = is_helly(inst.graph)
        measured = {"helly": ok}
        wit = {} if ok else {"balls": [list(b) for b in balls]}
        slack = 0
        if inst.n <= cfg.helly_oracle_max_n:
            ok2, balls2 = helly_oracle(inst.graph)
            measured["oracle"] = ok2
            if ok2 != ok:
                slack = -1
                wit["oracle_balls"] = None if balls2 is None else [list(b) for b in balls2]
        if "hull" in inst.tags and not ok:
            slack = -1
        if inst.helly_claim is not None and inst.helly_claim != ok:
            slack = -1
            measured["claimed"] = inst.helly_claim
        yield SuiteResult("helly", inst.id, None, measured, slack, wit, _status(slack), True)


def _vector_tripods(D: np.ndarray):
    """Check every triple at once per (x1, x2) pair; returns (ok, worst excess, failing triple)."""
    n = len(D)
    worst = 0
    for x1 in range(n):
        for x2 in range(x1 + 1, n):
            x3 = np.arange(x2 + 1, n)
            if not len(x3):
                continue
            d12, d13, d23 = D[x1, x2], D[x1, x3], D[x2, x3]
            r1 = -(-(d12 + d13 - d23) // 2)
            r2 = -(-(d12 + d23 - d13) // 2)
            r3 = -(-(d13 + d23 - d12) // 2)
            common = (D[x1][None, :] <= r1[:, None]) & (D[x2][None, :] <= r2[:, None]) & \
                     (D[x3] <= r3[:, None])
            has = common.any(axis=1)
            if not has.all():
                k = int(np.flatnonzero(~has)[0])
                return False, worst, (x1, x2, int(x3[k]))
            p = common.argmax(axis=1)
            e12 = D[x1, p] + D[p, x2] - d12
            e13 = D[x1, p] + D[p, x3] - d13
            e23 = D[x2, p] + D[p, x3] - d23
            worst = max(worst, int(np.max([e12, e13, e23])))
    return True, worst, None


def suite_tripods(corpus: Corpus, cfg: VerifyConfig):
    """Every triple of a Helly instance has a tripod with slack <= 1 and legs within 2 of geodesics."""
    for inst in corpus:
        if not inst.helly or inst.graph is None or inst.n < 3:
            continue
        X = inst.space
        D = X.dist // X.scale
        ok, excess, bad = _vector_tripods(D)
        measured = {"triples": inst.n * (inst.n - 1) * (inst.n - 2) // 6, "max_excess": excess}
        wit = {}
        if not ok:
            wit = {"triple": list(bad)}
            try:
                tripod(X, *bad)
            except NotHelly as exc:
                wit["balls"] = [list(b) for b in exc.balls]
            yield SuiteResult("tripods", inst.id, None, measured, -1, wit, FAIL, True)
            continue
        worst_slack = 0
        if inst.n <= cfg.tripod_full_max_n:
            for t in combinations(range(inst.n), 3):
                tp = tripod(X, *t)
                worst_slack = max(worst_slack, tp.slack)
                for i, j in ((0, 1), (0, 2), (1, 2)):
                    li, lj = tp.legs[i], tp.legs[j]
                    e = len(li) + len(lj) - 2 - D[t[i], t[j]]
                    if e > excess:
                        excess = int(e)
                        wit = {"triple": list(t), "center": tp.center}
            measured["max_slack"] = worst_slack
            measured["max_excess"] = excess
        margin = min(cfg.tol - excess, 1 - worst_slack)
        yield SuiteResult("tripods", inst.id, None, measured, margin, wit, _status(margin), True)


def suite_tree_delta(corpus: Corpus, cfg: VerifyConfig):
    """Trees, and hulls of trees, are 0-hyperbolic."""
    for inst in corpus:
        if not inst.is_tree:
            continue
        if inst.n < 4:
            yield _vacuous("tree_delta", inst, None, "fewer than four points")
            continue
        rep = gromov_delta(inst.space)
        yield SuiteResult("tree_delta", inst.id, None, {"delta": rep.delta}, -rep.delta,
                          rep.to_json()["witnesses"], _status(-rep.delta), True)


# --------------------------------------------------------------------------
# driver

SUITES = (
    "projection_geodesic",
    "concatenation",
    "one_geodesic",
    "all_geodesics",
    "morse_iff_contracting",
    "bounded_jumps",
    "local_to_global",
    "hull_quasiconvexity",
    "hull_reverse_triangle",
    "hull_geodesics_near_projection",
    "persistence",
    "density",
    "hull_identities",
    "helly",
    "tripods",
    "tree_delta",
)


def _suite_status(results: list[SuiteResult]) -> str:
    if any(r.status == FAIL and r.hard for r in results):
        return FAIL
    if any(r.status != VACUOUS for r in results):
        return PASS
    return VACUOUS


def run_all(corpus: Corpus, cfg: VerifyConfig | None = None) -> dict[str, Any]:
    """Run the selected suites and aggregate them into a JSON-ready report.

    The top-level status is ``fail`` iff some hard assertion fails,
    ``vacuous`` if nothing was checked, else ``pass``.
    """
    cfg = cfg or VerifyConfig()
    chosen = SUITES if cfg.suites is None else tuple(cfg.suites)
    unknown = [s for s in chosen if s not in SUITES]
    if unknown:
        raise BadParams(f"unknown suite(s) {unknown}; choose from {list(SUITES)}")
    tables: dict[str, list] = {"delta_h": [], "contraction_morse": [], "local_to_global": []}
    family_D: dict = {}
    runners: dict[str, Callable[[], Iterator[SuiteResult]]] = {
        "projection_geodesic": lambda: suite_projection_geodesic(corpus, cfg),
        "concatenation": lambda: suite_concatenation(corpus, cfg),
        "one_geodesic": lambda: suite_one_geodesic(corpus, cfg),
        "all_geodesics": lambda: suite_all_geodesics(corpus, cfg),
        "morse_iff_contracting": lambda: suite_morse_iff_contracting(corpus, cfg, tables["contraction_morse"]),
        "bounded_jumps": lambda: suite_bounded_jumps(corpus, cfg),
        "local_to_global": lambda: suite_local_to_global(corpus, cfg, tables["local_to_global"]),
        "hull_quasiconvexity": lambda: suite_hull_quasiconvexity(corpus, cfg, family_D),
        "hull_reverse_triangle": lambda: suite_hull_reverse_triangle(corpus, cfg, family_D),
        "hull_geodesics_near_projection": lambda: suite_hull_geodesics_near_projection(corpus, cfg),
        "persistence": lambda: suite_persistence(corpus, cfg),
        "density": lambda: suite_density(corpus, cfg, tables["delta_h"]),
        "hull_identities": lambda: suite_hull_identities(corpus, cfg),
        "helly": lambda: suite_helly(corpus, cfg),
        "tripods": lambda: suite_tripods(corpus, cfg),
        "tree_delta": lambda: suite_tree_delta(corpus, cfg),
    }
    # the reverse-triangle allowance comes from the quasiconvexity measurements
    if "hull_reverse_triangle" in chosen and "hull_quasiconvexity" not in chosen:
        for _ in suite_hull_quasiconvexity(corpus, cfg, family_D):
            pass
    suites_out = {}
    for name in SUITES:
        if name not in chosen:
            continue
        try:
            results = list(runners[name]())
        except InjhullError as exc:
            results = [SuiteResult(name, "<suite>", None, {}, -1, exc.witness.to_json(), FAIL, True)]
        counts = {k: sum(r.status == k for r in results) for k in (PASS, FAIL, VACUOUS)}
        counts["soft_fail"] = sum(r.status == FAIL and not r.hard for r in results)
        suites_out[name] = {"status": _suite_status(results), "counts": counts,
                            "results": [r.to_json() for r in results]}
    statuses = [s["status"] for s in suites_out.values()]
    if FAIL in statuses:
        status = FAIL
    elif PASS in statuses:
        status = PASS
    else:
        status = VACUOUS
    return {"status": status, "config": cfg.to_json(), "instances": len(corpus),
            "suites": suites_out, "tables": {k: _json_value(v) for k, v in tables.items()}}


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1)
