"""Constructors for the group families under study, with validators.

Families (p odd throughout):

* ``C(p, r)``: a, b of order p, central c of order p^{r-2}, [a,b] = c^{p^{r-3}}.
* ``G(p, r; eps)``: like C but with [a,c] = b and [a,b^-1] = c^{eps p^{r-3}},
  eps either 1 or the least quadratic non-residue mod p.
* ``B(3, r; beta, gamma, delta)``: the maximal-nilpotency-class 3-groups of
  order 3^r >= 81, generators s, s_1, ..., s_{r-1}.
* split metacyclic and abelian auxiliaries, and the extraspecial alias
  ``extraspecial(p) = C(p, 3)``.

Each constructor emits a consistent pc presentation; ``validate_family``
re-derives the structural facts (centers, characteristic subgroups, power
identities, splitness) on the enumerated group and fails loudly on any
mismatch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BadParams, ValidationFailure
from .pc_core import (DEFAULT_ORDER_BOUND, EnumeratedGroup, enumerate_group,
                      make_presentation)

FAMILIES = ("Metacyclic", "C", "G", "B", "Abelian", "Extraspecial")


@dataclass(frozen=True)
class FamilyParams:
    """Parameters selecting one group instance; serializes to a string key."""

    family: str
    p: int
    r: int
    epsilon: int = 0
    beta: int = 0
    gamma: int = 0
    delta: int = 0
    extra: tuple[int, ...] = ()

    def key(self) -> str:
        if self.family == "B":
            return f"B:{self.p}:{self.r}:{self.beta}:{self.gamma}:{self.delta}"
        if self.family == "G":
            return f"G:{self.p}:{self.r}:{self.epsilon}"
        if self.family == "C":
            return f"C:{self.p}:{self.r}"
        if self.family == "Extraspecial":
            return f"X:{self.p}"
        if self.family == "Abelian":
            return "A:%d:%s" % (self.p, ":".join(map(str, self.extra)))
        if self.family == "Metacyclic":
            return "M:%d:%s" % (self.p, ":".join(map(str, self.extra)))
        raise BadParams(f"unknown family {self.family!r}")

    @staticmethod
    def from_key(key: str) -> "FamilyParams":
        parts = key.split(":")
        kind = parts[0]
        nums = [int(x) for x in parts[1:]]
        if kind == "B":
            p, r, beta, gamma, delta = nums
            return FamilyParams("B", p, r, beta=beta, gamma=gamma, delta=delta)
        if kind == "G":
            p, r, eps = nums
            return FamilyParams("G", p, r, epsilon=eps)
        if kind == "C":
            p, r = nums
            return FamilyParams("C", p, r)
        if kind == "X":
            return FamilyParams("Extraspecial", nums[0], 3)
        if kind == "A":
            return FamilyParams("Abelian", nums[0], sum(nums[1:]), extra=tuple(nums[1:]))
        if kind == "M":
            return FamilyParams("Metacyclic", nums[0], nums[1] + nums[2],
                                extra=tuple(nums[1:]))
        raise BadParams(f"unknown family key {key!r}")


def least_nonresidue(p: int) -> int:
    squares = {(x * x) % p for x in range(1, p)}
    for v in range(2, p):
        if v not in squares:
            return v
    raise BadParams(f"no quadratic non-residue mod {p}")


def build_C(p: int, r: int, bound: int = DEFAULT_ORDER_BOUND) -> EnumeratedGroup:
    if r < 3:
        raise BadParams(f"C(p,r) requires r >= 3, got r={r}")
    m = p ** (r - 2)
    pres = make_presentation(
        p, ["a", "b", "c"],
        {"c": (m, [])},
        {("b", "a"): [("c", -(p ** (r - 3)))]},
    )
    g = enumerate_group(pres, bound=bound)
    g.params = FamilyParams("C", p, r)
    return g


def build_G(p: int, r: int, epsilon: int, bound: int = DEFAULT_ORDER_BOUND) -> EnumeratedGroup:
    if r < 4:
        raise BadParams(f"G(p,r;eps) requires r >= 4, got r={r}")
    eps = epsilon % p
    if eps == 0:
        raise BadParams("epsilon must be a unit mod p")
    nu = least_nonresidue(p)
    if eps != 1:
        squares = {(x * x) % p for x in range(1, p)}
        if eps in squares:
            raise BadParams(f"epsilon={epsilon} is a nonzero square mod {p}; use 1")
        eps = nu  # any non-residue gives the same group; normalize
    m = p ** (r - 2)
    pres = make_presentation(
        p, ["a", "b", "c"],
        {"c": (m, [])},
        {
            ("b", "a"): [("c", eps * p ** (r - 3))],
            ("c", "a"): [("b", -1)],
        },
    )
    g = enumerate_group(pres, bound=bound)
    g.params = FamilyParams("G", p, r, epsilon=eps)
    return g


def admissible_B(r: int, beta: int, gamma: int, delta: int) -> Optional[str]:
    """None when (beta,gamma,delta) is admissible at rank r, else the reason."""
    if r < 4:
        return f"r={r}: maximal-class parameters start at r=4"
    if beta == 1:
        if r < 5:
            return "beta=1 requires r >= 5"
        if gamma != 0:
            return "beta=1 forces gamma=0"
        if delta not in (0, 1, 2):
            return "beta=1 allows delta in {0,1,2}"
        return None
    if beta != 0:
        return "beta must be 0 or 1"
    if gamma == 0:
        if delta not in (0, 1):
            return "gamma=0 allows delta in {0,1}"
        return None
    if gamma in (1, 2):
        if delta != 0:
            return "gamma nonzero forces delta=0"
        if r % 2 == 1 and gamma == 2:
            return "gamma=2 needs even r"
        return None
    return "gamma must be in {0,1,2}"


def build_B(r: int, beta: int, gamma: int, delta: int,
            bound: int = DEFAULT_ORDER_BOUND) -> EnumeratedGroup:
    reason = admissible_B(r, beta, gamma, delta)
    if reason is not None:
        raise BadParams(f"B(3,{r};{beta},{gamma},{delta}): {reason}")
    labels = ["s"] + [f"s{i}" for i in range(1, r)]

    def slab(i: int) -> str:
        return f"s{i}"

    powers: dict[str, object] = {}
    powers["s"] = [(slab(r - 1), delta)] if delta else []
    # s_1^3 s_2^3 s_3 = s_{r-1}^gamma, rearranged to express s_1^3
    w1: dict[str, int] = {}
    w1[slab(2)] = -3
    w1[slab(3)] = w1.get(slab(3), 0) - 1
    w1[slab(r - 1)] = w1.get(slab(r - 1), 0) + gamma
    powers[slab(1)] = [(lab, e) for lab, e in w1.items() if e and _exists(lab, r)]
    # s_i^3 s_{i+1}^3 s_{i+2} = 1 with s_r = s_{r+1} = 1
    for i in range(2, r):
        w = [(slab(i + 1), -3), (slab(i + 2), -1)]
        powers[slab(i)] = [(lab, e) for lab, e in w if _exists(lab, r)]

    comms: dict[tuple[str, str], object] = {}
    for i in range(1, r - 1):
        comms[(slab(i), "s")] = [(slab(i + 1), 1)]
    if beta:
        comms[(slab(2), slab(1))] = [(slab(r - 1), -beta)]

    pres = make_presentation(3, labels, powers, comms)
    g = enumerate_group(pres, bound=bound)
    g.params = FamilyParams("B", 3, r, beta=beta, gamma=gamma, delta=delta)
    return g


def _exists(lab: str, r: int) -> bool:
    return lab == "s" or 1 <= int(lab[1:]) <= r - 1


def build_abelian(p: int, exponents: list[int],
                  bound: int = DEFAULT_ORDER_BOUND) -> EnumeratedGroup:
    if not exponents or any(e < 1 for e in exponents):
        raise BadParams("abelian type needs positive exponents")
    labels = [f"g{i}" for i in range(len(exponents))]
    powers = {lab: (p ** e, []) for lab, e in zip(labels, exponents)}
    pres = make_presentation(p, labels, powers, {})
    g = enumerate_group(pres, bound=bound)
    g.params = FamilyParams("Abelian", p, sum(exponents), extra=tuple(exponents))
    return g


def build_extraspecial(p: int, bound: int = DEFAULT_ORDER_BOUND) -> EnumeratedGroup:
    g = build_C(p, 3, bound=bound)
    g.params = FamilyParams("Extraspecial", p, 3)
    return g


def build_metacyclic(p: int, m: int, n: int, twist: int,
                     bound: int = DEFAULT_ORDER_BOUND) -> EnumeratedGroup:
    """Split metacyclic Z/p^m : Z/p^n with x^y = x^twist."""
    if m < 1 or n < 1:
        raise BadParams("metacyclic exponents must be positive")
    if twist % p == 0:
        raise BadParams("twist must be a unit mod p^m")
    t = twist % p ** m
    if pow(t, p ** n, p ** m) != 1:
        raise BadParams(f"twist {twist} has order not dividing p^n on Z/p^m")
    pres = make_presentation(
        p, ["y", "x"],
        {"y": (p ** n, []), "x": (p ** m, [])},
        {("x", "y"): [("x", t - 1)]},
    )
    g = enumerate_group(pres, bound=bound)
    g.params = FamilyParams("Metacyclic", p, m + n, extra=(m, n, t))
    return g


def build_auxiliary(kind: str, params: dict, bound: int = DEFAULT_ORDER_BOUND) -> EnumeratedGroup:
    if kind == "abelian":
        return build_abelian(params["p"], list(params["exponents"]), bound=bound)
    if kind == "extraspecial":
        return build_extraspecial(params["p"], bound=bound)
    if kind == "metacyclic":
        return build_metacyclic(params["p"], params["m"], params["n"],
                                params["twist"], bound=bound)
    raise BadParams(f"unknown auxiliary kind {kind!r}")


def build_from_params(params: FamilyParams, bound: int = DEFAULT_ORDER_BOUND) -> EnumeratedGroup:
    if params.family == "C":
        return build_C(params.p, params.r, bound=bound)
    if params.family == "G":
        return build_G(params.p, params.r, params.epsilon, bound=bound)
    if params.family == "B":
        return build_B(params.r, params.beta, params.gamma, params.delta, bound=bound)
    if params.family == "Abelian":
        return build_abelian(params.p, list(params.extra), bound=bound)
    if params.family == "Extraspecial":
        return build_extraspecial(params.p, bound=bound)
    if params.family == "Metacyclic":
        m, n, t = params.extra
        return build_metacyclic(params.p, m, n, t, bound=bound)
    raise BadParams(f"unknown family {params.family!r}")


def build_from_key(key: str, bound: int = DEFAULT_ORDER_BOUND) -> EnumeratedGroup:
    return build_from_params(FamilyParams.from_key(key), bound=bound)


# ---------------------------------------------------------------------------
# named subgroups / elements ("roles") from explicit generator words
# ---------------------------------------------------------------------------


def role_elements(g: EnumeratedGroup) -> dict[str, int]:
    """Distinguished elements (zeta, zeta', ...) by their defining words."""
    params: FamilyParams = g.params
    out: dict[str, int] = {}
    if params.family != "B":
        return out
    r = params.r
    k = r // 2
    widx = g.index_of_word
    if params.beta == 0:
        if r % 2 == 1:
            out["zeta"] = widx([("s2", 3 ** (k - 1))])
            out["zeta'"] = widx([("s1", 3 ** (k - 1))])
        else:
            out["zeta"] = widx([("s1", 3 ** (k - 1))])
            out["zeta'"] = widx([("s2", -(3 ** (k - 2)))])
    else:
        if r % 2 == 1:
            out["zeta"] = widx([("s2", 3 ** (k - 1))])
            out["zeta'"] = widx([("s3", -(3 ** (k - 2)))])
        else:
            out["zeta"] = widx([("s3", 3 ** (k - 2))])
            out["zeta'"] = widx([("s2", 3 ** (k - 2))])
    return out


def role_subgroups(g: EnumeratedGroup) -> dict[str, np.ndarray]:
    """Named subgroups, keyed by role tag, as sorted member arrays."""
    params: FamilyParams = g.params
    roles: dict[str, np.ndarray] = {}
    widx = g.index_of_word
    if params.family == "B":
        r = params.r
        for i in range(1, r):
            gens = [widx([(f"s{j}", 1)]) for j in range(i, r)]
            roles[f"gamma{i}"] = g.closure(gens)
        roles["Z"] = g.closure([widx([(f"s{r-1}", 1)])])
        roles["Phi"] = g.closure([widx([("s2", 1)]), widx([("s3", 1)])]) if r >= 4 else roles["gamma2"]
        elts = role_elements(g)
        zeta, zetap = elts["zeta"], elts["zeta'"]
        s = widx([("s", 1)])
        s1 = widx([("s1", 1)])
        i_range = ()
        if params.delta == 0:
            if params.beta == 0:
                i_range = (-1, 0, 1) if params.gamma == 0 else (0,)
            else:
                i_range = (0,)
        for i in i_range:
            x = g.mul(s, g.power(s1, i))
            roles[f"E{i}"] = g.closure([zeta, zetap, x])
            roles[f"V{i}"] = g.closure([zeta, x])
    elif params.family in ("C", "Extraspecial"):
        roles["Z"] = g.closure([widx([("c", 1)])])
        omega = np.flatnonzero(g.element_orders <= params.p)
        roles["Omega1"] = g.closure(list(omega))
    elif params.family == "G":
        roles["Z"] = g.closure([widx([("c", params.p)])])
    return roles


@dataclass
class ValidationReport:
    key: str
    checks: list[tuple[str, bool, str]] = field(default_factory=list)
    p_rank: Optional[int] = None

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append((name, bool(ok), detail))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def first_failure(self) -> Optional[tuple[str, str]]:
        for name, ok, detail in self.checks:
            if not ok:
                return name, detail
        return None

    def raise_on_failure(self) -> "ValidationReport":
        bad = self.first_failure()
        if bad is not None:
            raise ValidationFailure(f"{self.key}: check {bad[0]} failed: {bad[1]}")
        return self

    def as_dict(self) -> dict:
        return {
            "key": self.key,
            "passed": self.passed,
            "p_rank": self.p_rank,
            "checks": [
                {"name": n, "ok": ok, "detail": d} for n, ok, d in self.checks],
        }


def validate_family(g: EnumeratedGroup, params: FamilyParams | None = None,
                    strict: bool = True) -> ValidationReport:
    """Re-derive the family's structural facts on the enumerated group."""
    from .structure import p_rank  # local import; structure builds on pc_core

    params = params or g.params
    rep = ValidationReport(key=params.key())
    p = params.p
    rep.add("order", g.n == p ** params.r,
            f"|G| = {g.n}, expected {p ** params.r}")

    if params.family in ("C", "Extraspecial"):
        _validate_C(g, params, rep)
    elif params.family == "G":
        _validate_G(g, params, rep)
    elif params.family == "B":
        _validate_B(g, params, rep)
    elif params.family == "Abelian":
        inv = tuple(sorted(p ** e for e in params.extra))
        got = g.abelian_invariants()
        rep.add("abelian-invariants", got == inv, f"{got} vs {inv}")
    elif params.family == "Metacyclic":
        m, n, t = params.extra
        rep.add("metacyclic-order", g.n == p ** (m + n), "")
        rep.add("nonabelian-iff-twist", g.is_abelian() == (t % p ** m == 1),
                f"abelian={g.is_abelian()} twist={t}")

    rep.p_rank = p_rank(g)
    expected_rank = _expected_rank(params)
    if expected_rank is not None:
        rep.add("p-rank", rep.p_rank == expected_rank,
                f"rank {rep.p_rank}, expected {expected_rank}")
    if strict:
        rep.raise_on_failure()
    return rep


def _expected_rank(params: FamilyParams) -> Optional[int]:
    if params.family in ("C", "G", "Extraspecial"):
        return 2
    if params.family == "B":
        # the lone rank-three maximal-class case is (r;beta,gamma,delta) = (4;0,1,0)
        if (params.r, params.beta, params.gamma, params.delta) == (4, 0, 1, 0):
            return 3
        return 2
    if params.family == "Abelian":
        return len(params.extra)
    if params.family == "Metacyclic":
        m, n, t = params.extra
        return 1 if (m == 0 or n == 0) else 2
    return None


def _validate_C(g: EnumeratedGroup, params: FamilyParams, rep: ValidationReport) -> None:
    p, r = params.p, params.r
    widx = g.index_of_word
    a, b, c = (widx([(lab, 1)]) for lab in ("a", "b", "c"))
    zc = g.closure([c])
    rep.add("center-is-c", np.array_equal(np.sort(g.center_members), zc),
            "Z(G) = <c>")
    rep.add("center-order", len(zc) == p ** (r - 2), f"|<c>| = {len(zc)}")
    q = p ** (r - 3)
    ok = True
    for i in range(p):
        for j in range(p):
            x = g.mul(g.power(a, i), g.power(b, j))
            for s in range(p):
                for t in range(p):
                    y = g.mul(g.power(a, s), g.power(b, t))
                    if g.comm(x, y) != g.power(c, ((i * t - s * j) * q)):
                        ok = False
    rep.add("commutator-formula", ok, "[a^i b^j, a^s b^t] = c^{(it-sj)p^{r-3}}")
    omega_elts = np.flatnonzero(g.element_orders <= p)
    omega = g.closure(list(omega_elts))
    rep.add("omega1-order", len(omega) == p ** 3, f"|Omega_1| = {len(omega)}")
    inter = np.intersect1d(zc, omega)
    rep.add("central-product", len(inter) == p and len(zc) * len(omega) // p == g.n,
            "G = Z * Omega_1 with intersection of order p")


def _validate_G(g: EnumeratedGroup, params: FamilyParams, rep: ValidationReport) -> None:
    p, r, eps = params.p, params.r, params.epsilon
    widx = g.index_of_word
    a, b, c = (widx([(lab, 1)]) for lab in ("a", "b", "c"))
    m = eps * p ** (r - 3)
    rep.add("rel-ab-inverse",
            g.comm(a, g.inv[b]) == g.power(c, m), "[a,b^-1] = c^{eps p^{r-3}}")
    rep.add("rel-ac", g.comm(a, c) == b, "[a,c] = b")
    rep.add("rel-bc", g.comm(b, c) == 0, "[b,c] = 1")
    zc = g.closure([g.power(c, p)])
    rep.add("center", np.array_equal(np.sort(g.center_members), zc), "Z(G) = <c^p>")
    mc = p ** (r - 2)
    ok = True
    for i in range(p):
        for j in range(p):
            for k in range(mc):
                x = g.prod([g.power(a, i), g.power(b, j), g.power(c, k)])
                for s in range(p):
                    for t in range(p):
                        for u in range(mc):
                            y = g.prod([g.power(a, s), g.power(b, t), g.power(c, u)])
                            nn = eps * p ** (r - 3) * (
                                u * (i * (i - 1) // 2) + j * s - i * t
                                - k * (s * (s - 1) // 2))
                            want = g.mul(g.power(b, (i * u - s * k)), g.power(c, nn))
                            if g.comm(x, y) != want:
                                ok = False
                if not ok:
                    break
    rep.add("commutator-formula", ok,
            "[a^i b^j c^k, a^s b^t c^u] = b^{iu-sk} c^n")


def _validate_B(g: EnumeratedGroup, params: FamilyParams, rep: ValidationReport) -> None:
    r, beta, gamma, delta = params.r, params.beta, params.gamma, params.delta
    widx = g.index_of_word
    s = widx([("s", 1)])
    si = {i: widx([(f"s{i}", 1)]) for i in range(1, r)}
    si[r] = 0
    si[r + 1] = 0  # convention: s_r = s_{r+1} = 1

    ok = all(g.comm(si[i - 1], s) == si[i] for i in range(2, r))
    rep.add("rel-chain", ok, "s_i = [s_{i-1}, s]")
    rep.add("rel-s1s2", g.comm(si[1], si[2]) == g.power(si[r - 1], beta),
            "[s_1,s_2] = s_{r-1}^beta")
    rep.add("rel-s1-central-tail",
            all(g.comm(si[1], si[i]) == 0 for i in range(3, r)),
            "[s_1,s_i] = 1 for i >= 3")
    rep.add("rel-s-cube", g.power(s, 3) == g.power(si[r - 1], delta),
            "s^3 = s_{r-1}^delta")
    rep.add("rel-gamma-cube",
            g.prod([g.power(si[1], 3), g.power(si[2], 3), si[3]])
            == g.power(si[r - 1], gamma),
            "s_1^3 s_2^3 s_3 = s_{r-1}^gamma")
    ok = all(g.prod([g.power(si[i], 3), g.power(si[i + 1], 3), si[i + 2]]) == 0
             for i in range(2, r))
    rep.add("rel-cube-chain", ok, "s_i^3 s_{i+1}^3 s_{i+2} = 1")

    roles = role_subgroups(g)
    ok = True
    detail = ""
    for i in range(1, r):
        gam = roles[f"gamma{i}"]
        two_gen = g.closure([si[i], si[i + 1]] if i < r - 1 else [si[i]])
        if len(gam) != 3 ** (r - i) or not np.array_equal(gam, two_gen):
            ok = False
            detail = f"gamma_{i}"
            break
    rep.add("gamma-series", ok, detail or "gamma_i = <s_i, s_{i+1}>, order 3^{r-i}")
    rep.add("center", np.array_equal(np.sort(g.center_members), roles["Z"]),
            "Z = <s_{r-1}>")

    gam1, _ = g.subgroup_table(roles["gamma1"])
    rep.add("gamma1-abelian-iff-beta0", gam1.is_abelian() == (beta == 0),
            f"gamma_1 abelian = {gam1.is_abelian()}")
    gam2, _ = g.subgroup_table(roles["gamma2"])
    rep.add("gamma2-abelian", gam2.is_abelian(), "")

    # cube identity: (s^{+-1} s_1^{z_1} ... )^3 = s_{r-1}^{+-delta + gamma z_1 +- beta z_1^2}
    in_gamma1 = roles["gamma1"]
    ok = True
    for sign in (1, -1):
        s_part = g.power(s, sign % 3)
        for x in in_gamma1:
            z1 = int(g.exponents[x][1])
            want = g.power(si[r - 1], sign * delta + gamma * z1 + sign * beta * z1 * z1)
            if g.power(g.mul(s_part, int(x)), 3) != want:
                ok = False
                break
        if not ok:
            break
    rep.add("cube-identity", ok, "third-power identity on s gamma_1 cosets")

    mask = np.zeros(g.n, dtype=bool)
    mask[roles["gamma1"]] = True
    outside = np.flatnonzero(~mask)
    has_complement = bool((g.element_orders[outside] == 3).any())
    rep.add("split-iff-delta0", has_complement == (delta == 0),
            f"order-3 complement exists = {has_complement}")

    if delta == 0 and r >= 5:
        k = r // 2
        expect = (3 ** k, 3 ** k, 3 ** (k - 1)) if r % 2 else (3 ** k, 3 ** (k - 1), 3 ** (k - 1))
        got = tuple(int(g.element_orders[si[i]]) for i in (1, 2, 3))
        rep.add("s1-s2-s3-orders", got == expect, f"{got} vs {expect}")
        rep.add("phi", np.array_equal(roles["Phi"], roles["gamma2"]),
                "Phi(B) = <s_2, s_3> = gamma_2")
