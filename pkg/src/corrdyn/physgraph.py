"""Exploration and analysis of physical graphs of a correspondence.

The physical graph over F_{q^m} is 2-colored: blue vertices are x-line points,
red vertices are y-line points, and edges are curve points, each carrying its
pair of fiber multiplicities.  Exploration is breadth-first in canonical order
and therefore byte-reproducible.

Betti numbers count the cycle space of the multigraph where an edge
contributes min(mult_f, mult_g) parallel copies; one-sided folding artifacts
of the plane model do not inflate the count, while honest double edges
(non-minimal inputs, double horizontal isogenies) do.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .correspondence import (INF, Correspondence, EdgePoint, PointP1,
                             format_point, point_key)
from .errors import BudgetTooSmall, NotOnCurve, Truncated, UnsupportedRamified


def edge_parallel_count(mf: int, mg: int) -> int:
    return min(mf, mg)


@dataclass
class ColoredComponent:
    """A connected explored piece of the physical graph."""
    corr: Correspondence
    seed: tuple            # (PointP1, PointP1)
    blue: list             # sorted PointP1
    red: list
    edges: dict            # (x, y) -> (mult_f, mult_g)
    truncated: bool
    deficient: bool        # some explored vertex has rational fiber mass < degree

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def edge_mass(self) -> int:
        return sum(edge_parallel_count(mf, mg) for mf, mg in self.edges.values())

    @property
    def betti(self):
        """E - V + 1 with parallel multiplicities; None when truncated."""
        if self.truncated:
            return None
        return self.edge_mass - (len(self.blue) + len(self.red)) + 1

    def is_etale(self) -> bool:
        return all(mf == 1 and mg == 1 for mf, mg in self.edges.values())

    def blue_degree(self, x) -> int:
        return sum(mf for (a, _), (mf, _) in self.edges.items() if a == x)

    def red_degree(self, y) -> int:
        return sum(mg for (_, b), (_, mg) in self.edges.items() if b == y)

    def sort_key(self, pt):
        return point_key(self.corr.ctx, pt)


def explore(corr: Correspondence, seed_x: PointP1, seed_y: PointP1,
            budget: int = 10_000) -> ColoredComponent:
    """Connected component of the seed edge, BFS fiber completion both ways."""
    if budget < 1:
        raise BudgetTooSmall("edge budget must be >= 1")
    if not corr.on_curve(seed_x, seed_y):
        raise NotOnCurve(f"seed ({seed_x},{seed_y}) not on {corr.name}")
    ctx = corr.ctx
    edges: dict = {}
    mf_known: dict = {}
    mg_known: dict = {}
    blue_seen = {seed_x}
    red_seen = {seed_y}
    queue = deque([("b", seed_x), ("r", seed_y)])
    truncated = False
    deficient = False
    while queue:
        side, pt = queue.popleft()
        if side == "b":
            fib = corr.forward(pt)
            target = corr.d
            mass = sum(m for _, m in fib)
            if mass < target:
                deficient = True
            for y, m in fib:
                key = (pt, y)
                mf_known[key] = m
                if key not in edges:
                    if len(edges) + 1 > budget:
                        truncated = True
                        continue
                    edges[key] = None
                if y not in red_seen:
                    red_seen.add(y)
                    queue.append(("r", y))
        else:
            fib = corr.backward(pt)
            if sum(m for _, m in fib) < corr.e:
                deficient = True
            for x, m in fib:
                key = (x, pt)
                mg_known[key] = m
                if key not in edges:
                    if len(edges) + 1 > budget:
                        truncated = True
                        continue
                    edges[key] = None
                if x not in blue_seen:
                    blue_seen.add(x)
                    queue.append(("b", x))
    # fill multiplicities not seen from one side (only at truncation fringes)
    final = {}
    for key in edges:
        mf = mf_known.get(key)
        mg = mg_known.get(key)
        if mf is None:
            mf = corr._mult_in_fiber("f", key[0], key[1])
        if mg is None:
            mg = corr._mult_in_fiber("g", key[1], key[0])
        final[key] = (mf, mg)
    blue = sorted((x for x in blue_seen), key=lambda p: point_key(ctx, p))
    red = sorted((y for y in red_seen), key=lambda p: point_key(ctx, p))
    return ColoredComponent(corr=corr, seed=(seed_x, seed_y), blue=blue, red=red,
                            edges=final, truncated=truncated, deficient=deficient)


def components(corr: Correspondence, budget: int = 100_000, include_infinity=False):
    """All connected components over the coefficient field, canonical order."""
    ctx = corr.ctx
    seen = set()
    pts = [PointP1.finite(ctx.element_from_key(v)) for v in range(ctx.q)]
    if include_infinity:
        pts.append(INF)
    for x in pts:
        for y, _ in corr.forward(x):
            if (x, y) in seen:
                continue
            comp = explore(corr, x, y, budget=budget)
            seen.update(comp.edges)
            yield comp


# volcano analysis -------------------------------------------------------------

@dataclass
class VolcanoReport:
    component: ColoredComponent
    tag: str                       # tree | volcano | multi-cycle
    rim: list                      # vertex labels on the unique cycle (volcano)
    depths: dict                   # vertex label -> distance to rim (volcano)

    def rim_edge_count(self) -> int:
        return len(self.rim)


def _vertex_labels(comp: ColoredComponent):
    labels = [("b", x) for x in comp.blue] + [("r", y) for y in comp.red]
    return labels


def _adjacency(comp: ColoredComponent):
    adj: dict = {v: [] for v in _vertex_labels(comp)}
    for (x, y), (mf, mg) in comp.edges.items():
        mu = edge_parallel_count(mf, mg)
        if mu <= 0:
            mu = 1
        adj[("b", x)].append((("r", y), mu, (x, y)))
        adj[("r", y)].append((("b", x), mu, (x, y)))
    return adj


def volcano_classify(comp: ColoredComponent) -> VolcanoReport:
    """Classification by first Betti number; rim found by leaf pruning."""
    if comp.truncated:
        raise Truncated("cannot classify a truncated component")
    b = comp.betti
    if b == 0:
        return VolcanoReport(comp, "tree", [], {})
    if b >= 2:
        return VolcanoReport(comp, "multi-cycle", [], {})
    adj = _adjacency(comp)
    degree = {v: sum(mu for _, mu, _ in nb) for v, nb in adj.items()}
    alive = {v for v in adj}
    changed = True
    while changed:
        changed = False
        for v in sorted(alive, key=lambda t: (t[0], point_key(comp.corr.ctx, t[1]))):
            if degree[v] == 1:
                alive.discard(v)
                for w, mu, _ in adj[v]:
                    if w in alive:
                        degree[w] -= mu
                degree[v] = 0
                changed = True
    rim = sorted(alive, key=lambda t: (t[0], point_key(comp.corr.ctx, t[1])))
    # distances to the rim
    depths = {v: 0 for v in rim}
    frontier = deque(rim)
    while frontier:
        v = frontier.popleft()
        for w, _, _ in adj[v]:
            if w not in depths:
                depths[w] = depths[v] + 1
                frontier.append(w)
    return VolcanoReport(comp, "volcano", rim, depths)


def betti_by_spanning_tree(comp: ColoredComponent):
    """Independent cycle-space dimension: edges minus spanning-forest edges."""
    if comp.truncated:
        raise Truncated("betti of a truncated component")
    parent: dict = {}

    def find(v):
        while parent.get(v, v) != v:
            parent[v] = parent.get(parent[v], parent[v])
            v = parent[v]
        return v

    cycles = 0
    for (x, y), (mf, mg) in sorted(
            comp.edges.items(),
            key=lambda kv: (point_key(comp.corr.ctx, kv[0][0]),
                            point_key(comp.corr.ctx, kv[0][1]))):
        mu = edge_parallel_count(mf, mg)
        u, v = ("b", x), ("r", y)
        ru, rv = find(u), find(v)
        if ru == rv:
            cycles += mu
        else:
            parent[ru] = rv
            cycles += mu - 1
    return cycles


# point classification ----------------------------------------------------------

@dataclass
class PointClassification:
    verdict: str          # special_finite | special_cycle | generic
    radius: int           # certified radius for generic verdicts
    component_edges: int | None = None


def tree_ball_edge_count(d: int, e: int, r: int) -> int:
    """Edges of the radius-r ball around an edge of the (d,e)-biregular tree."""
    total = 1
    layer_b, layer_r = 1, 1  # the two endpoints of the central edge
    db, dr = d - 1, e - 1
    for _ in range(r):
        new_from_b = layer_b * db
        new_from_r = layer_r * dr
        total += new_from_b + new_from_r
        layer_b, layer_r = new_from_r, new_from_b
    return total


def classify_point(corr: Correspondence, seed_x: PointP1, seed_y: PointP1,
                   radius: int, budget: int = 10_000,
                   _comp: ColoredComponent | None = None) -> PointClassification:
    """Bounded-radius special/generic certificate for the seed edge.

    special_finite: the component closes, rationally mass-complete, within
    budget.  special_cycle: a cycle lies inside the radius-`radius` ball.
    generic: the ball out to the certified radius is a biregular tree ball;
    the certificate is injectivity of the specialization up to that radius,
    never a proof of genericity.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    need = tree_ball_edge_count(corr.d, corr.e, radius)
    if budget < need:
        raise BudgetTooSmall(f"budget {budget} below ball size {need}")
    comp = _comp
    if comp is None:
        if not corr.on_curve(seed_x, seed_y):
            raise NotOnCurve(f"seed ({seed_x},{seed_y}) not on {corr.name}")
        comp = explore(corr, seed_x, seed_y, budget=budget)
    key = (seed_x, seed_y)
    mf, mg = comp.edges[key]
    if mf != 1 or mg != 1:
        raise UnsupportedRamified("seed edge is ramified")
    if any(m != 1 or n != 1 for m, n in comp.edges.values()):
        raise UnsupportedRamified("component contains a ramified edge")
    if radius == 0:
        return PointClassification("generic", 0,
                                   comp.n_edges if not comp.truncated else None)
    if not comp.truncated and not comp.deficient:
        return PointClassification("special_finite", radius, comp.n_edges)
    # BFS ball around the seed edge, watching for a closing (non-tree) edge
    adj = _adjacency(comp)
    dist = {("b", seed_x): 0, ("r", seed_y): 0}
    frontier = deque([("b", seed_x), ("r", seed_y)])
    traversed = {key}
    cycle_at = None
    while frontier:
        v = frontier.popleft()
        if dist[v] >= radius:
            continue
        for w, _, ekey in adj[v]:
            if ekey in traversed:
                continue
            traversed.add(ekey)
            if w in dist:
                cand = dist[v] + 1
                cycle_at = cand if cycle_at is None else min(cycle_at, cand)
            else:
                dist[w] = dist[v] + 1
                frontier.append(w)
    if cycle_at is not None and cycle_at <= radius:
        return PointClassification("special_cycle", cycle_at)
    certified = radius
    if comp.deficient:
        # a missing fiber anywhere inside the ball weakens the certificate
        certified = _deficiency_radius(corr, comp, seed_x, seed_y, radius)
    return PointClassification("generic", certified)


def _deficiency_radius(corr, comp, seed_x, seed_y, radius):
    adj = _adjacency(comp)
    dist = {("b", seed_x): 0, ("r", seed_y): 0}
    frontier = deque([("b", seed_x), ("r", seed_y)])
    bad = radius
    while frontier:
        v = frontier.popleft()
        side, pt = v
        deg = comp.blue_degree(pt) if side == "b" else comp.red_degree(pt)
        full = corr.d if side == "b" else corr.e
        if deg < full:
            bad = min(bad, dist[v])
        for w, _, _ in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                if dist[w] <= radius:
                    frontier.append(w)
    return max(bad, 0)


# statistics --------------------------------------------------------------------

@dataclass
class StatsReport:
    corr_name: str
    field: str
    radius: int
    counts: dict = field(default_factory=dict)
    component_sizes: list = field(default_factory=list)
    rim_lengths: list = field(default_factory=list)

    def to_json(self) -> str:
        import json
        return json.dumps({
            "correspondence": self.corr_name,
            "field": self.field,
            "radius": self.radius,
            "counts": self.counts,
            "component_sizes": sorted(self.component_sizes),
            "rim_lengths": sorted(self.rim_lengths),
        }, sort_keys=True)


def stats(corr: Correspondence, radius: int, budget: int = 100_000,
          workers: int = 1) -> StatsReport:
    """Classify every edge over the coefficient field; deterministic output.

    Workers chunk the component list; the merge is order-independent because
    counts are summed and lists re-sorted.
    """
    ctx = corr.ctx
    comps = list(components(corr, budget=budget))
    rep = StatsReport(corr_name=corr.name, field=f"{ctx.p}^{ctx.k}", radius=radius,
                      counts={"special_finite": 0, "special_cycle": 0,
                              "generic": 0, "generic_deficient": 0,
                              "ramified": 0, "truncated": 0})

    def handle(comp):
        out = {"special_finite": 0, "special_cycle": 0, "generic": 0,
               "generic_deficient": 0, "ramified": 0, "truncated": 0}
        sizes = [comp.n_edges]
        rims = []
        if not comp.truncated and comp.betti == 1:
            rims.append(len(volcano_classify(comp).rim))
        for (x, y), (mf, mg) in comp.edges.items():
            if mf != 1 or mg != 1:
                out["ramified"] += 1
                continue
            if comp.truncated:
                out["truncated"] += 1
                continue
            try:
                cls = classify_point(corr, x, y, radius, budget=budget, _comp=comp)
            except UnsupportedRamified:
                out["ramified"] += 1
                continue
            if cls.verdict == "generic" and cls.radius < radius:
                out["generic_deficient"] += 1
            else:
                out[cls.verdict] += 1
        return out, sizes, rims

    if workers <= 1:
        results = [handle(c) for c in comps]
    else:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(handle, comps))
    for out, sizes, rims in results:
        for k, v in out.items():
            rep.counts[k] += v
        rep.component_sizes.extend(sizes)
        rep.rim_lengths.extend(rims)
    return rep


# directed view -----------------------------------------------------------------

@dataclass
class DirectedView:
    vertices: list
    edges: dict              # (x, y) -> (mult_f, mult_g)
    cycles: list             # directed cycles up to the requested length

    def out_degree(self, v):
        return sum(mf for (a, _), (mf, _) in self.edges.items() if a == v)

    def in_degree(self, v):
        return sum(mg for (_, b), (_, mg) in self.edges.items() if b == v)


def directed_view(corr: Correspondence, comp: ColoredComponent,
                  max_cycle_len: int = 6) -> DirectedView:
    """Hallouin-Perret directed graph of a self-correspondence component."""
    from .errors import NotSelfCorrespondence
    if corr.F != comp.corr.F:
        raise NotSelfCorrespondence("component belongs to another correspondence")
    # supported geometry is X = Y = P^1, so both vertex classes share one line
    verts = sorted({x for x, _ in comp.edges} | {y for _, y in comp.edges},
                   key=lambda p: point_key(corr.ctx, p))
    out_adj: dict = {}
    for (x, y) in comp.edges:
        out_adj.setdefault(x, []).append(y)
    cycles = []
    ctx = corr.ctx

    def dfs(start, v, path):
        if len(path) > max_cycle_len:
            return
        for w in sorted(out_adj.get(v, ()), key=lambda p: point_key(ctx, p)):
            if w == start:
                cycles.append(tuple(path))
            elif w not in path and len(path) < max_cycle_len:
                dfs(start, w, path + [w])

    for v in verts:
        dfs(v, v, [v])
    # deduplicate rotations
    seen = set()
    uniq = []
    for cyc in cycles:
        rots = {cyc[i:] + cyc[:i] for i in range(len(cyc))}
        key = min(tuple(point_key(ctx, p) for p in r) for r in rots)
        if key not in seen:
            seen.add(key)
            uniq.append(cyc)
    uniq.sort(key=lambda c: (len(c), tuple(point_key(ctx, p) for p in c)))
    return DirectedView(vertices=verts, edges=dict(comp.edges), cycles=uniq)


# emission ----------------------------------------------------------------------

def component_to_dot(comp: ColoredComponent, directed: bool = False) -> str:
    ctx = comp.corr.ctx
    lines = ["digraph G {" if directed else "graph G {"]
    arrow = "->" if directed else "--"
    if directed:
        verts = sorted({x for x, _ in comp.edges} | {y for _, y in comp.edges},
                       key=lambda p: point_key(ctx, p))
        for v in verts:
            lines.append(f'  "{format_point(ctx, v)}" [shape=circle];')
        for (x, y), (mf, mg) in sorted(
                comp.edges.items(), key=lambda kv: (point_key(ctx, kv[0][0]),
                                                    point_key(ctx, kv[0][1]))):
            lines.append(f'  "{format_point(ctx, x)}" {arrow} '
                         f'"{format_point(ctx, y)}" [label="{mf},{mg}"];')
    else:
        for x in comp.blue:
            lines.append(f'  "b:{format_point(ctx, x)}" [shape=box,color=blue];')
        for y in comp.red:
            lines.append(f'  "r:{format_point(ctx, y)}" [shape=circle,color=red];')
        for (x, y), (mf, mg) in sorted(
                comp.edges.items(), key=lambda kv: (point_key(ctx, kv[0][0]),
                                                    point_key(ctx, kv[0][1]))):
            lines.append(f'  "b:{format_point(ctx, x)}" {arrow} '
                         f'"r:{format_point(ctx, y)}" [label="{mf},{mg}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def component_to_json(comp: ColoredComponent) -> str:
    import json
    ctx = comp.corr.ctx
    return json.dumps({
        "correspondence": comp.corr.name,
        "field": f"{ctx.p}^{ctx.k}",
        "seed": [format_point(ctx, comp.seed[0]), format_point(ctx, comp.seed[1])],
        "blue": [format_point(ctx, x) for x in comp.blue],
        "red": [format_point(ctx, y) for y in comp.red],
        "edges": [[format_point(ctx, x), format_point(ctx, y), mf, mg]
                  for (x, y), (mf, mg) in sorted(
                      comp.edges.items(), key=lambda kv: (point_key(ctx, kv[0][0]),
                                                          point_key(ctx, kv[0][1])))],
        "truncated": comp.truncated,
        "deficient": comp.deficient,
        "betti": comp.betti,
    }, sort_keys=True)
