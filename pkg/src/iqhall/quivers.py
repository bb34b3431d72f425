"""Quivers with involution: validation, Cartan data, roots, enrichment.

An input quiver must be acyclic and carry an involution tau that respects
arrows.  From it we build the enriched bound quiver: one extra arrow
eps_v : v -> tau(v) per vertex (a loop when tau fixes v), together with the
nilpotent relations (the composite eps then eps vanishes around each orbit)
and the commutation relations that slide an eps past every original arrow
while twisting the arrow by tau.

Relation words are stored in application order: ``(a, b)`` means "apply a
first, then b".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .errors import ArrowNotRespected, CyclicQuiver, InputError, NotDynkin, NotInvolution


@dataclass(frozen=True)
class Arrow:
    id: str
    src: str
    tgt: str


@dataclass(frozen=True)
class IQuiver:
    vertices: Tuple[str, ...]           # sorted vertex names
    arrows: Tuple[Arrow, ...]           # sorted by id
    tau: Tuple[Tuple[str, str], ...]    # vertex involution, as sorted pairs
    tau_arrows: Tuple[Tuple[str, str], ...]
    itau_reps: Tuple[str, ...]

    # -- lookups -------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, v: str) -> int:
        return self.vertices.index(v)

    def tau_map(self) -> Dict[str, str]:
        return dict(self.tau)

    def tau_arrow_map(self) -> Dict[str, str]:
        return dict(self.tau_arrows)

    def arrow_by_id(self, aid: str) -> Arrow:
        for a in self.arrows:
            if a.id == aid:
                return a
        raise KeyError(aid)

    def is_split(self) -> bool:
        return all(u == v for u, v in self.tau)

    # -- Cartan / Euler data ---------------------------------------------------

    def arrow_count(self, src: str, tgt: str) -> int:
        return sum(1 for a in self.arrows if a.src == src and a.tgt == tgt)

    def euler_matrix(self) -> List[List[int]]:
        """E[i][j] = <S_i, S_j>_Q = delta_ij - #{arrows i -> j}."""
        n = self.n
        mat = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for a in self.arrows:
            mat[self.index(a.src)][self.index(a.tgt)] -= 1
        return mat

    def cartan_matrix(self) -> List[List[int]]:
        e = self.euler_matrix()
        n = self.n
        return [[e[i][j] + e[j][i] for j in range(n)] for i in range(n)]

    def euler_form(self, x, y) -> int:
        e = self.euler_matrix()
        return sum(x[i] * e[i][j] * y[j] for i in range(self.n) for j in range(self.n))

    def sym_form(self, x, y) -> int:
        return self.euler_form(x, y) + self.euler_form(y, x)

    def simple_vector(self, v: str) -> Tuple[int, ...]:
        return tuple(1 if u == v else 0 for u in self.vertices)

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt} for a in self.arrows],
            "tau": {u: v for u, v in self.tau},
            "itau_reps": list(self.itau_reps),
        }


@dataclass(frozen=True)
class CartanData:
    cartan: Tuple[Tuple[int, ...], ...]
    euler_Q: Tuple[Tuple[int, ...], ...]

    def sym(self, x, y) -> int:
        n = len(self.cartan)
        return sum(x[i] * self.cartan[i][j] * y[j] for i in range(n) for j in range(n))


def cartan_data(iq: IQuiver) -> CartanData:
    return CartanData(tuple(map(tuple, iq.cartan_matrix())),
                      tuple(map(tuple, iq.euler_matrix())))


# -- validation -----------------------------------------------------------------


def _check_acyclic(vertices, arrows):
    indeg = {v: 0 for v in vertices}
    out = {v: [] for v in vertices}
    for a in arrows:
        indeg[a.tgt] += 1
        out[a.src].append(a.tgt)
    queue = [v for v in vertices if indeg[v] == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if seen != len(vertices):
        raise CyclicQuiver("quiver has an oriented cycle")


def validate_iquiver(raw: dict) -> IQuiver:
    """Validate a raw quiver description and normalize it.

    The involution defaults to the identity; orbit representatives default
    to the smallest vertex name in each orbit.  The arrow involution is
    derived by pairing arrow groups (src, tgt) <-> (tau src, tau tgt) in
    sorted-id order, which is the unique deterministic choice.
    """
    verts = raw.get("vertices")
    if not verts:
        raise InputError("quiver needs at least one vertex")
    vertices = tuple(sorted(str(v) for v in verts))
    if len(set(vertices)) != len(vertices):
        raise InputError("duplicate vertex names")

    arrows = []
    for item in raw.get("arrows", []):
        a = Arrow(str(item["id"]), str(item["src"]), str(item["tgt"]))
        if a.src not in vertices or a.tgt not in vertices:
            raise InputError(f"arrow {a.id} touches an unknown vertex")
        if a.src == a.tgt:
            raise CyclicQuiver(f"loop at {a.src}")
        arrows.append(a)
    arrows.sort(key=lambda a: a.id)
    if len({a.id for a in arrows}) != len(arrows):
        raise InputError("duplicate arrow ids")
    _check_acyclic(vertices, arrows)

    tau_raw = raw.get("tau") or {}
    tau = {v: str(tau_raw.get(v, v)) for v in vertices}
    for v, w in tau.items():
        if w not in tau:
            raise NotInvolution(f"tau({v}) = {w} is not a vertex")
    for v in vertices:
        if tau[tau[v]] != v:
            raise NotInvolution(f"tau^2({v}) != {v}")

    groups: Dict[Tuple[str, str], List[str]] = {}
    for a in arrows:
        groups.setdefault((a.src, a.tgt), []).append(a.id)
    tau_arrows: Dict[str, str] = {}
    for (s, t), ids in groups.items():
        image = groups.get((tau[s], tau[t]))
        if image is None or len(image) != len(ids):
            raise ArrowNotRespected(
                f"tau sends arrows {s}->{t} to {tau[s]}->{tau[t]}, which has "
                f"{0 if image is None else len(image)} arrows instead of {len(ids)}")
        for aid, bid in zip(sorted(ids), sorted(image)):
            tau_arrows[aid] = bid
    for aid, bid in tau_arrows.items():
        if tau_arrows[bid] != aid:
            raise NotInvolution("derived arrow involution is not involutive")

    orbits = []
    placed = set()
    for v in vertices:
        if v in placed:
            continue
        orbit = {v, tau[v]}
        placed |= orbit
        orbits.append(orbit)
    reps_raw = raw.get("itau_reps")
    if reps_raw:
        reps = tuple(sorted(str(v) for v in reps_raw))
        covered = set()
        for r in reps:
            if r not in vertices:
                raise InputError(f"representative {r} is not a vertex")
            covered |= {r, tau[r]}
        if covered != set(vertices) or len(reps) != len(orbits):
            raise InputError("itau_reps must pick exactly one vertex per tau-orbit")
    else:
        reps = tuple(sorted(min(orbit) for orbit in orbits))

    return IQuiver(vertices, tuple(arrows),
                   tuple(sorted(tau.items())), tuple(sorted(tau_arrows.items())),
                   reps)


def make_iquiver(vertices, arrows, tau=None, itau_reps=None) -> IQuiver:
    """Programmatic constructor; arrows as (id, src, tgt) triples."""
    raw = {"vertices": list(vertices),
           "arrows": [{"id": i, "src": s, "tgt": t} for i, s, t in arrows]}
    if tau:
        raw["tau"] = dict(tau)
    if itau_reps:
        raw["itau_reps"] = list(itau_reps)
    return validate_iquiver(raw)


# -- enriched bound quiver ---------------------------------------------------


@dataclass(frozen=True)
class EnrichedQuiver:
    """The bound quiver presenting the fixed-point algebra.

    relations: tuple of (word, other) with words in application order; the
    relation asserts "product along word == product along other", where
    ``other is None`` means the word vanishes.
    """

    vertices: Tuple[str, ...]
    q_arrows: Tuple[Arrow, ...]
    eps_arrows: Tuple[Arrow, ...]
    tau: Tuple[Tuple[str, str], ...]
    tau_arrows: Tuple[Tuple[str, str], ...]
    itau_reps: Tuple[str, ...]
    relations: Tuple[Tuple[Tuple[str, ...], Optional[Tuple[str, ...]]], ...]

    def all_arrows(self) -> Tuple[Arrow, ...]:
        return self.q_arrows + self.eps_arrows

    def eps_id(self, v: str) -> str:
        return f"eps_{v}"

    def tau_map(self) -> Dict[str, str]:
        return dict(self.tau)

    def structure_key(self):
        """Canonical structural fingerprint, for equality up to nothing
        (names are already canonical for our constructions)."""
        return (self.vertices, self.q_arrows, self.eps_arrows,
                tuple(sorted((w, o) if o is not None else (w, ()) for w, o in self.relations)))


def enriched_quiver(iq: IQuiver) -> EnrichedQuiver:
    """Attach eps-arrows and the nilpotent/commutation relations."""
    tau = iq.tau_map()
    tau_ar = iq.tau_arrow_map()
    eps = tuple(Arrow(f"eps_{v}", v, tau[v]) for v in iq.vertices)
    relations: List[Tuple[Tuple[str, ...], Optional[Tuple[str, ...]]]] = []
    for v in iq.vertices:
        # eps_v then eps_{tau v} composes to zero around the orbit
        relations.append((((f"eps_{v}", f"eps_{tau[v]}")), None))
    for a in iq.arrows:
        # slide eps past the arrow: (a then eps_tgt) == (eps_src then tau(a))
        relations.append((((a.id, f"eps_{a.tgt}")), ((f"eps_{a.src}", tau_ar[a.id]))))
    return EnrichedQuiver(iq.vertices, iq.arrows, eps, iq.tau, iq.tau_arrows,
                          iq.itau_reps, tuple(relations))


def plain_quiver(iq: IQuiver) -> EnrichedQuiver:
    """The path algebra presentation: no eps arrows, no relations."""
    return EnrichedQuiver(iq.vertices, iq.arrows, (), iq.tau, iq.tau_arrows,
                          iq.itau_reps, ())


def _primed(v: str) -> str:
    return f"{v}'"


def double_framed(iq: IQuiver) -> EnrichedQuiver:
    """The double framed bound quiver of Q: two copies joined by eps pairs.

    The result is cyclic as a bare quiver (eps_v and eps_{v'} form 2-cycles),
    so it is returned as a bound quiver with its quadratic relations rather
    than as a validated acyclic quiver.  It coincides with the enriched
    quiver of the diagonal construction below.
    """
    verts = tuple(sorted([v for v in iq.vertices] + [_primed(v) for v in iq.vertices]))
    q_arrows = []
    for a in iq.arrows:
        q_arrows.append(a)
        q_arrows.append(Arrow(_primed(a.id), _primed(a.src), _primed(a.tgt)))
    q_arrows.sort(key=lambda a: a.id)
    tau = {}
    tau_ar = {}
    for v in iq.vertices:
        tau[v] = _primed(v)
        tau[_primed(v)] = v
    for a in iq.arrows:
        tau_ar[a.id] = _primed(a.id)
        tau_ar[_primed(a.id)] = a.id
    eps = tuple(Arrow(f"eps_{v}", v, tau[v]) for v in verts)
    relations: List[Tuple[Tuple[str, ...], Optional[Tuple[str, ...]]]] = []
    for v in verts:
        relations.append(((f"eps_{v}", f"eps_{tau[v]}"), None))
    for a in q_arrows:
        relations.append(((a.id, f"eps_{a.tgt}"), (f"eps_{a.src}", tau_ar[a.id])))
    reps = tuple(sorted(iq.vertices))
    return EnrichedQuiver(verts, tuple(q_arrows), eps,
                          tuple(sorted(tau.items())), tuple(sorted(tau_ar.items())),
                          reps, tuple(relations))


def diagonal_iquiver(iq: IQuiver) -> IQuiver:
    """Q together with a disjoint primed copy, with the swap involution."""
    vertices = [v for v in iq.vertices] + [_primed(v) for v in iq.vertices]
    arrows = [(a.id, a.src, a.tgt) for a in iq.arrows] + \
        [(_primed(a.id), _primed(a.src), _primed(a.tgt)) for a in iq.arrows]
    tau = {}
    for v in iq.vertices:
        tau[v] = _primed(v)
        tau[_primed(v)] = v
    return make_iquiver(vertices, arrows, tau, itau_reps=sorted(iq.vertices))


# -- Dynkin recognition and positive roots -------------------------------------


@dataclass(frozen=True)
class RootTable:
    dynkin_type: str                      # e.g. "A2", "D4", "A1xA1"
    positive_roots: Tuple[Tuple[int, ...], ...]
    vertices: Tuple[str, ...]

    @property
    def count(self) -> int:
        return len(self.positive_roots)


_EXPECTED = {"A": lambda n: n * (n + 1) // 2,
             "D": lambda n: n * (n - 1),
             "E": lambda n: {6: 36, 7: 63, 8: 120}[n]}


def _classify_component(component, adj) -> str:
    n = len(component)
    edges = sum(len(adj[v] & component) for v in component) // 2
    if edges != n - 1:
        raise NotDynkin("underlying graph component is not a tree")
    degrees = {v: len(adj[v] & component) for v in component}
    branch = [v for v in component if degrees[v] >= 3]
    if any(degrees[v] > 3 for v in component):
        raise NotDynkin("vertex of degree > 3")
    if not branch:
        return f"A{n}"
    if len(branch) > 1:
        raise NotDynkin("more than one branch vertex")
    b = branch[0]
    arms = []
    for start in sorted(adj[b] & component):
        length = 1
        prev, cur = b, start
        while True:
            nxt = [w for w in adj[cur] & component if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{arms[2] + 3}"
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return f"E{arms[2] + 4}"
    raise NotDynkin(f"arm lengths {arms} are not of ADE shape")


def root_table(iq: IQuiver) -> RootTable:
    """Recognize the ADE type of the underlying graph and list its positive
    roots, closed up from the simple roots under simple reflections."""
    n = iq.n
    adj = {v: set() for v in iq.vertices}
    for a in iq.arrows:
        if iq.arrow_count(a.src, a.tgt) + iq.arrow_count(a.tgt, a.src) > 1:
            raise NotDynkin("multiple edges between two vertices")
        adj[a.src].add(a.tgt)
        adj[a.tgt].add(a.src)

    components = []
    remaining = set(iq.vertices)
    while remaining:
        start = min(remaining)
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        remaining -= comp
        components.append(comp)
    labels = sorted(_classify_component(c, adj) for c in components)
    type_name = "x".join(labels)

    cartan = iq.cartan_matrix()
    simples = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    roots = set(simples)
    frontier = list(simples)
    while frontier:
        x = frontier.pop()
        for i in range(n):
            pairing = sum(cartan[i][j] * x[j] for j in range(n))
            y = tuple(x[j] - pairing * (1 if j == i else 0) for j in range(n))
            if all(c >= 0 for c in y) and any(c > 0 for c in y) and y not in roots:
                roots.add(y)
                frontier.append(y)

    expected = 0
    for label in labels:
        expected += _EXPECTED[label[0]](int(label[1:]))
    if len(roots) != expected:
        raise NotDynkin(f"reflection closure found {len(roots)} roots, expected {expected}")
    ordered = tuple(sorted(roots, key=lambda r: (sum(r), r)))
    return RootTable(type_name, ordered, iq.vertices)


def is_dynkin(iq: IQuiver) -> bool:
    try:
        root_table(iq)
        return True
    except NotDynkin:
        return False
