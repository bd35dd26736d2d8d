"""Base-2 exponential and logarithm on representable series, plus the stage
machinery that closes a development triple under 2^x step by step.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from .development import (
    Development,
    HSpace,
    Triple,
    _develop,
    triple_check_maximal,
    triple_extend,
)
from .errors import (
    AlreadyPresent,
    InfinitesimalExponent,
    IrrationalConstantExponent,
    LadderTooShallow,
    NotLogRepresentable,
)
from .monomial import GroupRegistry, Monomial, grp_init_ladder, grp_lookup, grp_new_generator, mono_log
from .residue import RealAlg, ra_pow2
from .series import Series, ser_sign, ser_split

__all__ = [
    "exp_series",
    "log_series",
    "DyadicReport",
    "dyadic_check",
    "ChainMember",
    "ChainState",
    "chain_run",
    "GadgetSpec",
    "GadgetReport",
    "gadget_build",
    "purely_infinite",
]


def _current_stage(reg: GroupRegistry) -> int:
    return max((g.stage for g in reg.generators), default=0)


def purely_infinite(s: Series) -> bool:
    """All known monomials > 1, and an unknown tail (if any) above 1 as well."""
    if not s.terms:
        return False
    if any(m.is_one() or m.reg.sign_of(m) <= 0 for _, m in s.terms):
        return False
    return s.cutoff is None or s.cutoff.reg.sign_of(s.cutoff) > 0


def exp_series(s: Series, reg: GroupRegistry, stage: int | None = None, name: str | None = None) -> Series:
    """2^s for s with no infinitesimal part and a rational constant."""
    sp = ser_split(s)
    # a cutoff above 1 is read as a purely infinite unknown tail
    hidden_small = s.cutoff is not None and (s.cutoff.is_one() or reg.sign_of(s.cutoff) < 0)
    if sp.infinitesimal_part.terms or hidden_small:
        raise InfinitesimalExponent(f"2^s is not representable: {s} has an infinitesimal part")
    if not sp.constant.is_rational:
        raise IrrationalConstantExponent(f"constant {sp.constant} is not rational")
    coeff = ra_pow2(sp.constant.exact_rational)
    if not sp.infinite_part.terms and sp.infinite_part.cutoff is None:
        return Series.const(coeff)
    if stage is None:
        stage = _current_stage(reg)
    m = grp_new_generator(reg, sp.infinite_part, stage, name)
    return Series.monomial(m, coeff)


def log_series(s: Series, reg: GroupRegistry) -> Series:
    if len(s.terms) != 1 or s.cutoff is not None:
        raise NotLogRepresentable(f"log needs a single exact term, got {s}")
    u, m = s.terms[0]
    q = u.log2_exponent()
    if q is None:
        raise NotLogRepresentable(f"coefficient {u} is not a rational power of 2")
    return Series.const(q) + mono_log(reg, m)


# --------------------------------------------------------------------------
# dyadic condition
# --------------------------------------------------------------------------

def _in_images(tri: Triple, s: Series, max_len: int) -> bool:
    """s lies in phi(A): it develops completely, or differs from a stored
    image by something that does (matching cutoff markers cancel)."""
    if _develop(s, tri, max_len).complete:
        return True
    for img in tri.dev_map.values():
        if img.cutoff != s.cutoff or img.tail_sign != s.tail_sign:
            continue
        if _develop(s.without_cutoff() - img.without_cutoff(), tri, max_len).complete:
            return True
    return False


@dataclass
class DyadicReport:
    checked_sub: list[str] = field(default_factory=list)
    checked_sup: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checked_sub": self.checked_sub,
            "checked_sup": self.checked_sup,
            "skipped": self.skipped,
            "failures": self.failures,
        }


def dyadic_check(tri: Triple, samples: Sequence[Monomial] | None = None,
                 images: Sequence[Series] | None = None, max_len: int = 16) -> DyadicReport:
    """Check log(H) = phi(A) cap k((H^{>1})) on samples.

    ``samples`` are monomials of H (default: the basis of H); ``images`` are
    series of phi(A) (default: the stored images).  Only purely infinite
    images take part in the second direction.
    """
    reg = tri.registry
    rep = DyadicReport()
    if samples is None:
        samples = tri.h.basis
    if images is None:
        images = list(tri.dev_map.values())
    for h in samples:
        label = str(h)
        if not tri.h.contains(h):
            rep.failures.append({"direction": "sub", "sample": label, "reason": "not in H"})
            continue
        if any(reg.is_deepest(g) for g, _ in h.exps):
            rep.skipped.append(label)
            continue
        L = log_series(Series.monomial(h), reg)
        rep.checked_sub.append(label)
        if L.terms and not purely_infinite(L):
            rep.failures.append({"direction": "sub", "sample": label,
                                 "reason": f"log {L} is not purely infinite"})
        elif any(not tri.h.contains(m) for _, m in L.terms):
            rep.failures.append({"direction": "sub", "sample": label,
                                 "reason": f"log {L} has monomials outside H"})
        elif not _in_images(tri, L, max_len):
            rep.failures.append({"direction": "sub", "sample": label,
                                 "reason": f"log {L} is not in the image of the field"})
    for img in images:
        if not purely_infinite(img) and not (img.terms and purely_infinite(-img)):
            continue
        if any(not tri.h.contains(m) for _, m in img.terms):
            continue
        label = str(img)
        rep.checked_sup.append(label)
        neg = ser_sign(img) < 0
        m = grp_lookup(reg, -img if neg else img)
        if m is None:
            rep.failures.append({"direction": "sup", "sample": label, "reason": "2^r has no generator"})
        elif not tri.h.contains(m):
            rep.failures.append({"direction": "sup", "sample": label,
                                 "reason": f"2^r = {m} is not in H"})
    return rep


# --------------------------------------------------------------------------
# stage chain
# --------------------------------------------------------------------------

@dataclass
class ChainMember:
    name: str
    ambient: Series
    image: Series
    entered: int
    kind: str  # in-field | immediate | in-image
    exp_monomial: Monomial | None = None
    exp_stage: int | None = None
    exp_was_new: bool = False


@dataclass
class ChainState:
    stage: int
    triple: Triple
    trace: list[dict] = field(default_factory=list)
    members: list[ChainMember] = field(default_factory=list)
    pending: list[tuple[str, Series]] = field(default_factory=list)
    h_by_stage: list[HSpace] = field(default_factory=list)
    max_len: int = 16

    def member(self, name: str) -> ChainMember:
        for m in self.members:
            if m.name == name:
                return m
        raise KeyError(name)

    def member_images(self) -> list[Series]:
        return [m.image for m in self.members]

    # -- one stage: bring every developable agenda element into B_j ---------------
    def develop(self) -> dict:
        j = self.stage
        event = {"j": j, "new_generators": [], "developments": []}
        still = []
        for name, r in self.pending:
            dev: Development = _develop(r, self.triple, self.max_len)
            if dev.gap is not None:
                still.append((name, r))
                event["developments"].append({"name": name, "case": "deferred", "gap": str(dev.gap)})
                continue
            if dev.complete:
                self.members.append(ChainMember(name, r, r, j, "in-field"))
                event["developments"].append({"name": name, "case": "in-field", "image": str(r)})
                continue
            try:
                self.triple = triple_extend(self.triple, r, name, self.max_len)
                image = self.triple.dev_map[name]
                kind = self.triple.cases[name]
                if kind != "immediate":
                    # the next monomial fell outside H right at the length bound
                    still.append((name, r))
                    event["developments"].append({"name": name, "case": "deferred"})
                    continue
            except AlreadyPresent:
                image, kind = r, "in-image"
            self.members.append(ChainMember(name, r, image, j, kind))
            event["developments"].append({"name": name, "case": kind, "image": str(image)})
        self.pending = still
        agenda = [m.ambient for m in self.members] + [r for _, r in self.pending]
        rep = triple_check_maximal(self.triple, agenda, self.max_len)
        self.triple = rep.triple
        event["maximal_consistent"] = rep.maximal_consistent
        self.trace.append(event)
        return event

    # -- H_{j+1} = <H_j, 2^r for purely infinite images r of B_j> ------------------
    def exponentiate(self) -> list[str]:
        reg = self.triple.registry
        nxt = self.stage + 1
        h = self.triple.h
        created = []
        for mem in self.members:
            if mem.exp_monomial is not None or not purely_infinite(mem.image):
                continue
            before = grp_lookup(reg, mem.image)
            m = exp_series(mem.image, reg, stage=nxt, name=f"2^({mem.name})").terms[0][1]
            mem.exp_monomial = m
            mem.exp_was_new = before is None
            if h.contains(m):
                mem.exp_stage = next((i for i, hh in enumerate(self.h_by_stage) if hh.contains(m)), nxt)
            else:
                h = h.extended(m)
                mem.exp_stage = nxt
            if before is None:
                created.append(f"{m}")
        self.triple = replace(self.triple, h=h)
        self.stage = nxt
        self.h_by_stage.append(h)
        rep = dyadic_check(self.triple, images=self.member_images(), max_len=self.max_len)
        self.trace[-1]["new_generators"] = created
        self.trace[-1]["dyadic"] = rep.to_json()
        return created

    def to_json(self) -> dict:
        return {
            "stage": self.stage,
            "stages": self.trace,
            "members": [
                {"name": m.name, "entered": m.entered, "kind": m.kind, "image": str(m.image),
                 "exp": None if m.exp_monomial is None else str(m.exp_monomial),
                 "exp_stage": m.exp_stage}
                for m in self.members
            ],
            "pending": [n for n, _ in self.pending],
        }


def _normalise(y: Series) -> Monomial:
    if not y.terms:
        raise ValueError("y must be nonzero with a known leading term")
    m = y.terms[0][1]
    if m.is_one() or m.reg is None:
        raise ValueError("y must be infinite or infinitesimal")
    # -y and 1/y have the valuations m and 1/m
    return m if m.reg.sign_of(m) > 0 else m.inverse()


def _start_chain(reg: GroupRegistry, ladder_depth: int, agenda, names, max_len) -> ChainState:
    if reg.depth < ladder_depth:
        raise LadderTooShallow(f"registry has {reg.depth} rungs, {ladder_depth} requested")
    h0 = HSpace([reg.ladder(i) for i in range(ladder_depth)])
    names = list(names) if names is not None else [f"a{i}" for i in range(len(agenda))]
    st = ChainState(0, Triple(reg, h0), pending=list(zip(names, agenda)), h_by_stage=[h0],
                    max_len=max_len)
    return st


def chain_run(y: Series, stages: int, agenda: Sequence[Series], ladder_depth: int | None = None,
              names: Sequence[str] | None = None, max_len: int = 16) -> ChainState:
    """Run the H_j chain for ``stages`` steps starting from the ladder of y."""
    if stages < 0:
        raise ValueError("stages must be non-negative")
    v = _normalise(y)
    reg = v.reg
    if ladder_depth is None:
        ladder_depth = reg.depth
    st = _start_chain(reg, ladder_depth, agenda, names, max_len)
    if not st.triple.h.contains(v):
        raise ValueError(f"the valuation {v} of y is not in the ladder group")
    for _ in range(stages):
        st.develop()
        st.exponentiate()
    st.develop()
    rep = dyadic_check(st.triple, images=st.member_images(), max_len=max_len)
    st.trace[-1]["dyadic"] = rep.to_json()
    return st


# --------------------------------------------------------------------------
# gadget constants
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GadgetSpec:
    beta_max: int
    i_max: int
    ladder_depth: int
    # finite stand-in for a limit level: successor levels gamma_1 < gamma_2 < ...
    limit_cofinal: tuple[int, ...] | None = None


@dataclass
class GadgetReport:
    interleaving: list[dict] = field(default_factory=list)
    placement: list[dict] = field(default_factory=list)
    limit: list[dict] = field(default_factory=list)
    chain: ChainState | None = None

    @property
    def ok(self) -> bool:
        return (all(r["ok"] for r in self.interleaving) and all(p["ok"] for p in self.placement)
                and all(p["ok"] for p in self.limit))

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "interleaving": self.interleaving,
            "placement": self.placement,
            "limit": self.limit,
            "registry": None if self.chain is None else self.chain.triple.registry.to_json(),
        }


def _cname(level, i) -> str:
    return f"c_{{{level},{i}}}"


def _chain_check(items: list[tuple[str, Series]]) -> dict:
    checks = []
    ok = True
    for (na, a), (nb, b) in zip(items, items[1:]):
        try:
            res = "ok" if a.cmp(b) > 0 else "violated"
        except Exception as exc:  # undetermined comparisons are data here
            res = f"undetermined: {type(exc).__name__}"
        ok = ok and res == "ok"
        checks.append({"pair": f"{na} > {nb}", "result": res})
    return {"display": " > ".join(n for n, _ in items), "checks": checks, "ok": ok}


def level_width(spec: GadgetSpec, beta: int) -> int:
    """Number of materialised constants c_{beta,i} (i = 1..width)."""
    return spec.i_max - beta


def gadget_build(spec: GadgetSpec, max_len: int = 16):
    """Materialise c_{beta,i} for beta <= beta_max and check their placement."""
    if spec.beta_max < 0 or spec.i_max < 1:
        raise ValueError("beta_max must be >= 0 and i_max >= 1")
    if spec.ladder_depth < spec.i_max + spec.beta_max + 2:
        raise LadderTooShallow(
            f"ladder depth {spec.ladder_depth} < i_max + beta_max + 2 = {spec.i_max + spec.beta_max + 2}")
    reg = grp_init_ladder(spec.ladder_depth)
    y = [Series.monomial(reg.ladder(i)) for i in range(spec.ladder_depth)]
    top = spec.i_max
    consts: dict = {}
    for i in range(1, top + 1):
        consts[(0, i)] = Series([(1, reg.ladder(j)) for j in range(i, top + 1)],
                                reg.ladder(top + 1), tail_sign=1)
    agenda = [consts[(0, i)] for i in range(1, top + 1)]
    st = _start_chain(reg, spec.ladder_depth, agenda,
                      [_cname(0, i) for i in range(1, top + 1)], max_len)
    rep = GadgetReport(chain=st)
    for beta in range(spec.beta_max + 1):
        st.develop()
        if beta == spec.beta_max:
            break
        st.exponentiate()
        new = []
        for i in range(1, level_width(spec, beta + 1) + 1):
            src = st.member(_cname(beta, i + 1))
            c = Series.monomial(src.exp_monomial)
            consts[(beta + 1, i)] = c
            new.append((_cname(beta + 1, i), c))
            mono = src.exp_monomial
            gen_stage = max(reg.generators[g].stage for g, _ in mono.exps)
            prev_h = st.h_by_stage[beta]
            rep.placement.append({
                "constant": _cname(beta + 1, i),
                "log": _cname(beta, i + 1),
                "monomial": str(mono),
                "generator_stage": gen_stage,
                "entered_h_stage": src.exp_stage,
                "log_entered_b_stage": src.entered,
                "new_generator": src.exp_was_new,
                "in_previous_h": prev_h.contains(mono),
                "ok": (gen_stage == beta + 1 and src.exp_stage == beta + 1
                       and not prev_h.contains(mono) and src.entered == beta),
            })
        st.pending.extend(new)
    for beta in range(spec.beta_max + 1):
        width = spec.i_max if beta == 0 else level_width(spec, beta)
        if width < 1:
            continue
        items = [("y_0", y[0])]
        for i in range(1, width + 1):
            items.append((_cname(beta, i), consts[(beta, i)]))
            items.append((f"y_{i}", y[i]))
        row = _chain_check(items)
        row["level"] = beta
        rep.interleaving.append(row)
    if spec.limit_cofinal:
        _limit_level(spec, st, consts, y, rep)
    rep.chain = st
    return consts, rep


def _limit_level(spec: GadgetSpec, st: ChainState, consts: dict, y, rep: GadgetReport) -> None:
    gam = tuple(spec.limit_cofinal)
    if any(g < 1 or g > spec.beta_max for g in gam) or list(gam) != sorted(set(gam)):
        raise ValueError("limit_cofinal must be strictly increasing successor levels <= beta_max")
    n = len(gam)
    for j, g in enumerate(gam, start=1):
        if (g, j) not in consts:
            raise ValueError(f"c_{{{g},{j}}} is not materialised; raise i_max")
    reg = st.triple.registry
    items = [("y_0", y[0])]
    for i in range(1, n + 1):
        c = Series([(1, consts[(gam[j - 1], j)].terms[0][1]) for j in range(i, n + 1)],
                   reg.ladder(n), tail_sign=1)
        consts[("omega", i)] = c
        items += [(_cname("omega", i), c), (_cname(gam[i - 1], i), consts[(gam[i - 1], i)]),
                  (f"y_{i}", y[i])]
    row = _chain_check(items)
    row["level"] = "omega"
    rep.interleaving.append(row)
    # earliest stage whose H carries the whole development of c_{omega,1}
    first = None
    for j, hh in enumerate(st.h_by_stage):
        dev = _develop(consts[("omega", 1)], Triple(reg, hh), st.max_len)
        if dev.gap is None:
            first = j
            break
    st.pending.append((_cname("omega", 1), consts[("omega", 1)]))
    st.develop()
    rep.limit.append({"constant": _cname("omega", 1), "cofinal": list(gam),
                      "first_stage_developable": first, "ok": first == gam[-1]})
