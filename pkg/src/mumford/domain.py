"""Good fundamental domains, point reduction, and putting generators into good position.

Generators are exact rational matrices.  A :class:`GoodDomain` stores the
generators together with the open balls ``B_1..B_g, B'_1..B'_g``.  The
tree form (:class:`TreeDomain`) lives on the finite tree spanned by a piece of
an orbit; :func:`good_position` drives the search that grows the orbit until a
tree domain certifies, then converts it to balls.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .berkovich import (
    Ball,
    BerkPoint,
    ball_image,
    berk_in_ball,
    closed_disjoint,
    distance,
    gauss_image,
    meet,
    path_point,
    span_tree,
)
from .padic import Padic, PrecisionError, valuation
from .proj import (
    INF,
    Mat2,
    apply,
    eigen_data,
    invert_word,
    orbit,
    reduce_word,
    word_matrix,
)

__all__ = [
    "GoodDomain",
    "TreeDomain",
    "GoodPosition",
    "Relation",
    "NonHyperbolic",
    "Inconclusive",
    "AgentInsufficient",
    "check_good_domain",
    "reduce_point",
    "build_agent",
    "construct_tree_domain",
    "certify_tree_domain",
    "tree_domain_to_balls",
    "good_position",
    "find_interior_point",
    "change_coordinates",
]


class AgentInsufficient(RuntimeError):
    """The approximated tree is too small for the construction to close up."""


class Inconclusive(RuntimeError):
    """No verdict within the search budget (distinct from a negative answer)."""

    def __init__(self, message, m_tried):
        super().__init__(message)
        self.m_tried = m_tried


# -- ball form -----------------------------------------------------------


@dataclass
class GoodDomain:
    gens: list
    balls: list  # B_1..B_g, B'_1..B'_g (open)
    p: int
    words: list = None  # each generator as a word in the original inputs
    conjugator: Mat2 = None  # new coordinates = conjugator(old coordinates)

    @property
    def g(self):
        return len(self.gens)

    def B(self, i):
        return self.balls[i]

    def Bp(self, i):
        return self.balls[self.g + i]

    def points(self):
        return [b.gauss_point() for b in self.balls]

    @property
    def c(self):
        """Minimum distance between the Gauss points of the balls."""
        pts = self.points()
        return min(distance(x, y) for x, y in combinations(pts, 2))

    @property
    def log_d(self):
        """``log_p`` of the minimum diameter of the balls."""
        return -max(b.q for b in self.balls)

    def infinity_interior(self):
        return all(not b.closure().contains(INF) for b in self.balls)

    def to_json(self):
        g = self.g
        out = {
            "p": self.p,
            "generators": [m.to_json() for m in self.gens],
            "balls": [self.balls[i].to_json() for i in range(g)],
            "balls_prime": [self.balls[g + i].to_json() for i in range(g)],
            "c": str(self.c),
        }
        if self.words is not None:
            out["words"] = [list(w) for w in self.words]
        if self.conjugator is not None:
            out["conjugator"] = self.conjugator.to_json()
        return out


def check_good_domain(gens, balls):
    """Verify the good fundamental domain axioms.

    Returns ``(True, None)`` or ``(False, reason)``.
    """
    g = len(gens)
    if len(balls) != 2 * g:
        return False, "expected %d balls" % (2 * g)
    for b in balls:
        if not b.is_open:
            return False, "ball %r is not open" % (b,)
    closures = [b.closure() for b in balls]
    for i, j in combinations(range(2 * g), 2):
        if not closed_disjoint(closures[i], closures[j]):
            return False, "closed balls %d and %d meet" % (i, j)
    for i, m in enumerate(gens):
        B, Bp = balls[i], balls[g + i]
        if ball_image(m, Bp.complement_ball()) != B.closure():
            return False, "generator %d does not map the outside of B'_%d onto closed B_%d" % (i + 1, i + 1, i + 1)
        if ball_image(m.adjugate(), B.complement_ball()) != Bp.closure():
            return False, "inverse of generator %d does not map the outside of B_%d onto closed B'_%d" % (
                i + 1, i + 1, i + 1)
    return True, None


def reduce_point(F, z, budget=1000):
    """Move ``z`` into ``F``: returns ``(q, word)`` with ``q = word(z)`` and ``q`` in ``F``."""
    g = F.g
    word = ()
    q = z
    inv = [m.adjugate() for m in F.gens]
    for _ in range(budget):
        for i in range(g):
            if F.Bp(i).contains(q):
                q = apply(F.gens[i], q)
                word = (i + 1,) + word
                break
            if F.B(i).contains(q):
                q = apply(inv[i], q)
                word = (-(i + 1),) + word
                break
        else:
            return q, reduce_word(word)
    raise RuntimeError("possible limit point: reduction exceeded %d steps" % budget)


# -- verdicts --------------------------------------------------------------


@dataclass
class GoodPosition:
    domain: GoodDomain
    m: int

    kind = "GoodPosition"

    def to_json(self):
        return {"verdict": self.kind, "m": self.m, "domain": self.domain.to_json()}


@dataclass
class Relation:
    word: tuple

    kind = "Relation"

    def to_json(self):
        return {"verdict": self.kind, "word": list(self.word)}


@dataclass
class NonHyperbolic:
    word: tuple
    matrix: Mat2

    kind = "NonHyperbolic"

    def to_json(self):
        return {"verdict": self.kind, "word": list(self.word), "matrix": self.matrix.to_json()}


# -- tree form -------------------------------------------------------------


@dataclass
class Agent:
    """The tree spanned by a finite orbit, with identifications by single generators."""

    gens: list
    p: int
    tree: object
    ident: dict  # key -> {letter: key}
    comp: dict  # key -> component id
    word: dict  # key -> word w with w(root of component) = key
    mats: dict = field(default_factory=dict)

    def letter_matrix(self, h):
        return self.gens[h - 1] if h > 0 else self.gens[-h - 1].adjugate()

    def matrix(self, w):
        if w not in self.mats:
            self.mats[w] = word_matrix(self.gens, w).primitive()
        return self.mats[w]

    def is_leaf(self, key):
        return key in self.tree.leaves or self.tree.degree(key) <= 1


def build_agent(gens, m, a, p, depth=30, precision=None, berk_base=()):
    """Span the tree of the orbit ``Gamma_m a`` and identify vertices related by a generator.

    ``a`` is one point or a tuple of points.  Type-2 points in ``berk_base``
    are moved by ``Gamma_m`` as well; a rank-1 group needs this, since the
    orbit of its fixed points alone spans no vertices along the axis.
    """
    if precision is None:
        precision = 2 * depth + 10
    g = len(gens)
    pg = {}
    for i in range(g):
        pg[i + 1] = gens[i].to_padic(p, precision)
        pg[-(i + 1)] = gens[i].adjugate().to_padic(p, precision)
    base = a if isinstance(a, tuple) else (a,)
    base = tuple(x if isinstance(x, Padic) else Padic.from_rational(x, p, precision) for x in base)
    pts = []
    for _, imgs in orbit(pg, m, base):
        for x in imgs:
            if x is INF:
                raise ValueError("orbit meets INF")
            pts.append(x)
    if berk_base:
        for w, _ in orbit(pg, m, ()):
            M = word_matrix(gens, w)
            pts.extend(gauss_image(M, P) for P in berk_base)
    T = span_tree(pts, p, depth)
    letters = [h for i in range(1, g + 1) for h in (i, -i)]
    lm = {h: (gens[h - 1] if h > 0 else gens[-h - 1].adjugate()) for h in letters}
    ident = {}
    for k in sorted(T.vertices):
        P = T.vertices[k]
        row = {}
        for h in letters:
            img = gauss_image(lm[h], P)
            if img.key in T.vertices:
                row[h] = img.key
        ident[k] = row
    comp, word = {}, {}
    cid = 0
    for r in sorted(T.vertices):
        if r in comp:
            continue
        comp[r] = cid
        word[r] = ()
        queue = [r]
        for x in queue:
            for h, y in sorted(ident[x].items()):
                if y not in comp:
                    comp[y] = cid
                    word[y] = reduce_word((h,) + word[x])
                    queue.append(y)
        cid += 1
    return Agent(list(gens), p, T, ident, comp, word)


@dataclass
class TreeDomain:
    """Vertices ``V``, interior edges ``E`` and paired boundary edges.

    ``pairs[i] = ((R_i, Q_i), (R'_i, Q'_i))`` with ``R`` inside and ``Q``
    outside; ``words[i]`` maps ``(R'_i, Q'_i)`` to ``(Q_i, R_i)``.
    """

    V: list
    E: list
    pairs: list
    words: list
    vertices: dict
    gens: list
    p: int

    @property
    def I(self):
        out = []
        for (r, q), (rp, qp) in self.pairs:
            out.append((r, q))
            out.append((rp, qp))
        return out

    def matrices(self):
        return [word_matrix(self.gens, w).primitive() for w in self.words]


def _conjugator(agent, Qk, Qp, R, Rp):
    # group element sending Qk to R and Qp to Rp, if the agent knows one
    if agent.comp.get(Qk) != agent.comp.get(R):
        return None
    w = reduce_word(agent.word[R] + invert_word(agent.word[Qk]))
    if not w:
        return None
    M = agent.matrix(w)
    if gauss_image(M, agent.tree.vertices[Qp]).key != Rp:
        return None
    return w


def _seed(agent):
    T = agent.tree
    gens = agent.gens
    p = agent.p
    fps = []
    for gm in gens[:2]:
        _, _, f1, f2 = eigen_data(gm, p)
        fps += [f1, f2]
    fps = [x for x in fps if x is not INF]
    P = None
    for x in fps:
        B = BerkPoint(x, 200, p) if not isinstance(x, Padic) else BerkPoint(x, math.floor(x.absprec), p)
        if P is None:
            P = B
        else:
            v = valuation(P.center - B.center, p) if P.center != B.center else math.inf
            P = BerkPoint(P.center, min(P.q, B.q, v), p)
    if P is not None and P.key in T.vertices and not agent.is_leaf(P.key):
        return P.key
    cands = [k for k in T.vertices if not agent.is_leaf(k)]
    if not cands:
        raise AgentInsufficient("agent tree has no interior vertex")
    if P is None:
        return min(cands)
    return min(cands, key=lambda k: (distance(P, T.vertices[k]), k))


def construct_tree_domain(agent, seed=None):
    """Grow a fundamental domain in the agent's tree by propagating from a seed vertex."""
    T = agent.tree
    if seed is None:
        seed = _seed(agent)
    V = [seed]
    inV = {seed}
    E, O, pairs, words = [], [], [], []

    def expand(Qp, came_from):
        for Qk in T.neighbors(Qp):
            if Qk == came_from:
                continue
            hit = None
            for idx, (R, Rp) in enumerate(O):
                w = _conjugator(agent, Qk, Qp, R, Rp)
                if w is not None:
                    hit = (idx, R, Rp, w)
                    break
            if hit is not None:
                idx, R, Rp, w = hit
                del O[idx]
                pairs.append(((R, Rp), (Qp, Qk)))
                words.append(w)
            else:
                O.append((Qp, Qk))

    expand(seed, None)
    steps = 0
    while O:
        steps += 1
        if steps > len(T.vertices) + 1:
            raise AgentInsufficient("propagation did not close up; increase m")
        Q, Qp = O.pop(0)
        if agent.is_leaf(Qp):
            raise AgentInsufficient("agent insufficient, increase m")
        E.append((Q, Qp))
        V.append(Qp)
        inV.add(Qp)
        expand(Qp, Q)
    # orient each pair so its word starts with a positive letter when possible
    for i, w in enumerate(words):
        if w[0] < 0 and invert_word(w)[0] > 0:
            words[i] = invert_word(w)
            pairs[i] = (pairs[i][1], pairs[i][0])
    verts = {k: T.vertices[k] for k in V}
    for (r, q), (rp, qp) in pairs:
        verts[q] = T.vertices[q]
        verts[qp] = T.vertices[qp]
    return TreeDomain(V, E, pairs, words, verts, agent.gens, agent.p)


def _edge_ball(R, Q, t, p):
    """Open ball cut off at distance ``t`` from ``R`` on the edge towards ``Q``."""
    M = path_point(R, Q, t)
    below = Q.q > M.q and valuation(Q.center - M.center, p) >= M.q if Q.center != M.center else Q.q > M.q
    if below:
        return Ball(Q.center, M.q, p, closed=False)
    return Ball(M.center, M.q, p, closed=True, complement=True)


def _turn(R, Q):
    # distance from R to the top of the path R -> Q
    return R.q - meet(R, Q).q


def _cut_offset(R, Q, Rp, Qp, L, integral_radii):
    """Offset ``t`` from ``R'`` (and ``L - t`` from ``R``) for the paired cuts.

    A cut exactly at the top of a path that goes up and then down would give
    a ball whose closure swallows the near side, so such offsets are skipped.
    Midpoints come first, integral offsets before half-integral ones.
    """
    bad = {_turn(Rp, Qp), L - _turn(R, Q)}
    half = L / 2
    cands = []
    if integral_radii and L.denominator == 1:
        cands += sorted((Fraction(k) for k in range(1, int(L))), key=lambda t: (abs(t - half), t))
    cands += sorted((Fraction(k, 2) for k in range(1, int(2 * L))), key=lambda t: (abs(t - half), t))
    for t in cands:
        if 0 < t < L and t not in bad:
            return t
    return half


def tree_domain_to_balls(D, integral_radii=True):
    """Balls cut at the midpoints of the boundary edges.

    With ``integral_radii`` an odd-length edge is cut at integer offsets
    ``t`` and ``L - t`` on the two paired edges, which keeps every radius in
    the value group of Q_p whenever possible.
    """
    p = D.p
    vs = D.vertices
    Bs, Bps = [], []
    for (r, q), (rp, qp) in D.pairs:
        R, Q, Rp, Qp = vs[r], vs[q], vs[rp], vs[qp]
        L = distance(R, Q)
        t = _cut_offset(R, Q, Rp, Qp, L, integral_radii)
        Bps.append(_edge_ball(Rp, Qp, t, p))
        Bs.append(_edge_ball(R, Q, L - t, p))
    return GoodDomain(D.matrices(), Bs + Bps, p, words=list(D.words))


def _interior_point(D):
    used = set()
    for (r, q), (rp, qp) in D.pairs:
        used.add(r)
        used.add(rp)
    for k in D.V:
        if k not in used:
            return D.vertices[k]
    if not D.E:
        return D.vertices[D.V[0]]
    vs = D.vertices
    u, v = max(D.E, key=lambda e: (distance(vs[e[0]], vs[e[1]]), e))
    L = distance(vs[u], vs[v])
    return path_point(vs[u], vs[v], L / 2)


def certify_tree_domain(gens, D, budget=1000):
    """Check that ``D`` is a good fundamental domain for the words ``D.words``
    and that those words generate the same group as ``gens``."""
    g = len(gens)
    vs = D.vertices
    if len(D.pairs) != g:
        return False
    # connectivity of V with E
    Vset = set(D.V)
    adj = {k: set() for k in D.V}
    for u, v in D.E:
        if u not in Vset or v not in Vset:
            return False
        adj[u].add(v)
        adj[v].add(u)
    seen = {D.V[0]}
    stack = [D.V[0]]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if seen != Vset:
        return False
    # boundary edges are terminal
    outs = []
    for r, q in D.I:
        if r not in Vset or q in Vset:
            return False
        outs.append(q)
    if len(set(outs)) != len(outs):
        return False
    mats = D.matrices()
    for ((r, q), (rp, qp)), M in zip(D.pairs, mats):
        if gauss_image(M, vs[rp]).key != q or gauss_image(M, vs[qp]).key != r:
            return False
    P = _interior_point(D)
    if P is None:
        return False
    try:
        F = tree_domain_to_balls(D)
    except (ValueError, PrecisionError):
        return False
    inv = [m.adjugate() for m in mats]
    for i in range(g):
        for h in (gens[i], gens[i].adjugate()):
            X = gauss_image(h, P)
            for _ in range(budget):
                for j in range(g):
                    if berk_in_ball(X, F.Bp(j)):
                        X = gauss_image(mats[j], X)
                        break
                    if berk_in_ball(X, F.B(j)):
                        X = gauss_image(inv[j], X)
                        break
                else:
                    break
            else:
                return False
            if X.key != P.key:
                return False
    ok, _ = check_good_domain(F.gens, F.balls)
    return ok


# -- coordinates -----------------------------------------------------------


def find_interior_point(F, extra_centers=()):
    """A finite rational point outside every closed ball of ``F``."""
    p = F.p
    closures = [b.closure() for b in F.balls]
    centers = [b.center for b in F.balls] + list(extra_centers)
    cands = []
    for k in range(-3, 8):
        for u in range(p):
            cands.append(Fraction(u) * Fraction(p) ** k)
    for c in centers:
        for k in range(-3, 8):
            for u in range(1, p):
                cands.append(c + Fraction(u) * Fraction(p) ** k)
    for n in range(0, 200):
        cands.append(Fraction(n))
    for w in cands:
        if all(not cl.contains(w) for cl in closures):
            return w
    raise ValueError("no interior point found")


def change_coordinates(F, h):
    """Conjugate the domain by ``h``: generators ``h g h^-1``, balls ``h(B)``."""
    hinv = h.adjugate()
    gens = [(h * m * hinv).primitive() for m in F.gens]
    balls = [ball_image(h, b) for b in F.balls]
    conj = h if F.conjugator is None else (h * F.conjugator).primitive()
    return GoodDomain(gens, balls, F.p, words=F.words, conjugator=conj)


def move_infinity_inside(F, extra_centers=()):
    """If INF is not interior to ``F``, send an interior point to INF."""
    if F.infinity_interior():
        return F
    w = find_interior_point(F, extra_centers)
    h = Mat2(0, 1, 1, -w).primitive()
    return change_coordinates(F, h)


# -- the driver ------------------------------------------------------------


def _precheck_words(gens, p, frontier, budget):
    """Extend ``frontier`` (reduced words of one length, with matrices) by one letter
    and scan the new words for relations and non-hyperbolic elements.

    Returns ``(verdict_or_None, new_frontier, words_used)``; the verdict is
    ``"budget"`` when ``budget`` runs out.
    """
    g = len(gens)
    letters = [h for i in range(1, g + 1) for h in (i, -i)]
    lm = {h: (gens[h - 1] if h > 0 else gens[-h - 1].adjugate()) for h in letters}
    # primitive integer generators: det valuations add along a word and the
    # trace test becomes one divisibility check
    vdet = {h: valuation(lm[h].det(), p) for h in letters}
    nxt = []
    for w, M, vd in frontier:
        for h in letters:
            if w and h == -w[-1]:
                continue
            if len(nxt) >= budget:
                return "budget", nxt, len(nxt)
            nxt.append((w + (h,), M * lm[h], vd + vdet[h]))
    for w, M, _ in nxt:
        if M.is_scalar():
            return Relation(w), nxt, len(nxt)
    for w, M, vd in nxt:
        if M.trace() % p ** (-(-vd // 2)) == 0:
            return NonHyperbolic(w, M), nxt, len(nxt)
    return None, nxt, len(nxt)


def good_position(gens, p, max_m=12, max_words=200000, depth=30, verbose=False):
    """Find free generators in good position with a good fundamental domain.

    Returns :class:`GoodPosition`, :class:`Relation` or
    :class:`NonHyperbolic`; raises :class:`Inconclusive` when ``max_m`` or the
    word budget runs out.
    """
    gens = [(m if isinstance(m, Mat2) else Mat2.from_rows(m)).primitive()
            for m in gens]
    frontier = [((), Mat2.identity(), 0)]
    used = 0
    for m in range(1, max_m + 1):
        verdict, frontier, u = _precheck_words(gens, p, frontier, max_words - used)
        used += u
        if verdict == "budget":
            raise Inconclusive("word budget of %d exhausted at m=%d" % (max_words, m), m - 1)
        if verdict is not None:
            return verdict
        try:
            F = _attempt(gens, p, m, depth)
        except (AgentInsufficient, PrecisionError, ValueError, RuntimeError) as exc:
            if verbose:
                print("m=%d: %s" % (m, exc))
            continue
        if F is not None:
            return GoodPosition(F, m)
    raise Inconclusive("no certified domain up to m=%d" % max_m, max_m)


def _attempt(gens, p, m, depth):
    g = len(gens)
    h = None
    work = gens
    N = 2 * depth + 10
    for shift in range(0, 8):
        _, _, a, b = eigen_data(work[0], p, N=N)
        if isinstance(a, Padic) and not a.exact:
            # each letter can cost up to val(det) digits of an irrational base point
            N = 2 * depth + 10 + m * max(valuation(x.det(), p) for x in gens)
            _, _, a, b = eigen_data(work[0], p, N=N)
        if a is not INF and b is not INF:
            berk = ()
            base = a
            if g == 1:
                base = (a, b)
                berk = (_fixed_meet(a, b, p, depth),)
            try:
                agent = build_agent(work, m, base, p, depth=depth, precision=N, berk_base=berk)
                break
            except ValueError:
                pass
        # send a point off the limit set to INF and retry
        h = Mat2(0, 1, 1, -(shift + 1)).primitive()
        work = [(h * x * h.adjugate()).primitive() for x in gens]
    else:
        raise ValueError("could not keep INF off the orbit")
    D = construct_tree_domain(agent)
    if not certify_tree_domain(work, D):
        return None
    F = tree_domain_to_balls(D)
    if h is not None:
        F = GoodDomain(F.gens, F.balls, p, words=F.words, conjugator=h)
    F = move_infinity_inside(F, [v.center for v in D.vertices.values()])
    ok, _ = check_good_domain(F.gens, F.balls)
    if not ok:
        return None
    return F


def _fixed_meet(a, b, p, depth):
    q = valuation(a - b, p) if not _close(a, b) else depth
    return BerkPoint(a, min(q, depth), p)


def _close(x, y):
    try:
        d = x - y
        return d.is_zero() if isinstance(d, Padic) else d == 0
    except PrecisionError:
        return True
