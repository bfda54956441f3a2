"""Dual graphs of totally degenerate special fibers with Galois action:
cycle space, induced Frobenius matrix, intersection matrices, component
groups, and fibral-lattice membership.

Edges are oriented (tail, head, label) triples; labels must be unique and
sortable, and fix every deterministic choice (spanning tree, basis order).
A 1-cycle is an integer vector indexed by edges, +1 meaning traversal from
tail to head; its boundary must vanish at every vertex.
"""

from . import zmat
from .torus import CharacterLattice
from .zmat import mat_vec, smith_normal_form


class GraphError(Exception):
    pass


class Disconnected(GraphError):
    pass


class NotSupported(GraphError):
    pass


class DualGraph:
    """Vertices are components of the special fiber, edges are nodes; the
    Galois action is a permutation pair respecting incidence."""

    def __init__(self, num_vertices, edges, vertex_perm=None, edge_perm=None):
        self.num_vertices = num_vertices
        self.edges = [(int(t), int(h), label) for (t, h, label) in edges]
        labels = [e[2] for e in self.edges]
        if len(set(labels)) != len(labels):
            raise GraphError("edge labels must be unique")
        for t, h, _ in self.edges:
            if not (0 <= t < num_vertices and 0 <= h < num_vertices):
                raise GraphError("edge endpoint out of range")
        self.vertex_perm = tuple(vertex_perm) if vertex_perm else tuple(range(num_vertices))
        self.edge_perm = tuple(edge_perm) if edge_perm else tuple(range(len(self.edges)))
        if sorted(self.vertex_perm) != list(range(num_vertices)):
            raise GraphError("vertex permutation is not a permutation")
        if sorted(self.edge_perm) != list(range(len(self.edges))):
            raise GraphError("edge permutation is not a permutation")
        # orientation sign of each edge under the Galois generator
        self.edge_sign = []
        for i, (t, h, _) in enumerate(self.edges):
            t2, h2 = self.vertex_perm[t], self.vertex_perm[h]
            it, ih, _ = self.edges[self.edge_perm[i]]
            if (it, ih) == (t2, h2):
                self.edge_sign.append(1)
            elif (it, ih) == (h2, t2):
                self.edge_sign.append(-1)
            else:
                raise GraphError(f"galois action breaks incidence at edge {i}")
        if not self._connected():
            raise Disconnected("dual graph must be connected")
        self.galois_order = self._perm_order()

    def _connected(self):
        if self.num_vertices == 0:
            return False
        seen = {0}
        frontier = [0]
        while frontier:
            v = frontier.pop()
            for t, h, _ in self.edges:
                for a, b in ((t, h), (h, t)):
                    if a == v and b not in seen:
                        seen.add(b)
                        frontier.append(b)
        return len(seen) == self.num_vertices

    def _perm_order(self):
        k = 1
        vp, ep = self.vertex_perm, self.edge_perm
        cv = vp
        ce = ep
        while not (cv == tuple(range(self.num_vertices)) and ce == tuple(range(len(self.edges)))):
            cv = tuple(vp[i] for i in cv)
            ce = tuple(ep[i] for i in ce)
            k += 1
            if k > 10 ** 4:
                raise GraphError("galois permutation order too large")
        return k

    @property
    def num_edges(self):
        return len(self.edges)

    def h1_rank(self):
        return self.num_edges - self.num_vertices + 1

    def sigma_cycle(self, cycle):
        """Image of a cycle under the Galois generator."""
        vec = list(cycle.vector) if isinstance(cycle, Cycle) else list(cycle)
        out = [0] * self.num_edges
        for i, c in enumerate(vec):
            if c:
                out[self.edge_perm[i]] += self.edge_sign[i] * c
        return Cycle(self, out)

    def edge_orbits(self):
        """Galois orbits of edge indices, each listed in sigma order starting
        from its smallest-label edge; orbits sorted by that label."""
        seen = set()
        orbits = []
        order = sorted(range(self.num_edges), key=lambda i: self.edges[i][2])
        for i in order:
            if i in seen:
                continue
            orbit = [i]
            seen.add(i)
            j = self.edge_perm[i]
            while j != i:
                orbit.append(j)
                seen.add(j)
                j = self.edge_perm[j]
            orbits.append(orbit)
        return orbits

    def to_json_dict(self):
        return {
            "vertices": self.num_vertices,
            "edges": [[t, h, label] for (t, h, label) in self.edges],
            "galois": {"vertex_perm": list(self.vertex_perm),
                       "edge_perm": list(self.edge_perm)},
        }

    @classmethod
    def from_json_dict(cls, data):
        galois = data.get("galois") or {}
        return cls(data["vertices"], data["edges"],
                   galois.get("vertex_perm"), galois.get("edge_perm"))


class Cycle:
    """Closed oriented 1-cycle: integer vector over the edges."""

    __slots__ = ("graph", "vector")

    def __init__(self, graph, vector):
        vec = tuple(int(v) for v in vector)
        if len(vec) != graph.num_edges:
            raise GraphError("cycle vector length mismatch")
        boundary = [0] * graph.num_vertices
        for i, c in enumerate(vec):
            t, h, _ = graph.edges[i]
            boundary[t] -= c
            boundary[h] += c
        if any(boundary):
            raise GraphError(f"vector has nonzero boundary {boundary}")
        self.graph = graph
        self.vector = vec

    def __add__(self, other):
        return Cycle(self.graph, [a + b for a, b in zip(self.vector, other.vector)])

    def __sub__(self, other):
        return Cycle(self.graph, [a - b for a, b in zip(self.vector, other.vector)])

    def __neg__(self):
        return Cycle(self.graph, [-a for a in self.vector])

    def scale(self, k):
        return Cycle(self.graph, [k * a for a in self.vector])

    def __eq__(self, other):
        return isinstance(other, Cycle) and self.graph is other.graph and self.vector == other.vector

    def __hash__(self):
        return hash(self.vector)

    def is_zero(self):
        return not any(self.vector)

    def __repr__(self):
        return f"Cycle{self.vector}"


def h1_basis(graph):
    """Basis of the cycle space from the deterministic spanning tree, plus the
    matrix of the Galois generator on that basis.

    Tree edges are chosen greedily in label order.  Each remaining edge e
    yields the fundamental cycle that traverses e tail-to-head and returns
    through the tree; basis order follows the labels of the non-tree edges.
    The coordinate of any cycle along basis element i is its entry at the
    i-th non-tree edge.
    """
    parent = list(range(graph.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    order = sorted(range(graph.num_edges), key=lambda i: graph.edges[i][2])
    tree = []
    cotree = []
    for i in order:
        t, h, _ = graph.edges[i]
        rt, rh = find(t), find(h)
        if rt != rh and t != h:
            parent[rt] = rh
            tree.append(i)
        else:
            cotree.append(i)
    # adjacency restricted to the tree, for path finding
    adj = {v: [] for v in range(graph.num_vertices)}
    for i in tree:
        t, h, _ = graph.edges[i]
        adj[t].append((h, i, 1))
        adj[h].append((t, i, -1))

    def tree_path(a, b):
        """Edge steps (index, direction) along the tree from a to b."""
        prev = {a: None}
        frontier = [a]
        while frontier:
            v = frontier.pop(0)
            if v == b:
                break
            for w, i, d in adj[v]:
                if w not in prev:
                    prev[w] = (v, i, d)
                    frontier.append(w)
        steps = []
        v = b
        while v != a:
            u, i, d = prev[v]
            steps.append((i, d))
            v = u
        steps.reverse()
        return steps

    basis = []
    for e in cotree:
        t, h, _ = graph.edges[e]
        vec = [0] * graph.num_edges
        vec[e] = 1
        for i, d in tree_path(h, t):
            vec[i] += d
        basis.append(Cycle(graph, vec))
    rank = graph.h1_rank()
    assert len(basis) == rank

    def coords(cycle):
        return tuple(cycle.vector[e] for e in cotree)

    F = [[0] * rank for _ in range(rank)]
    for j, b in enumerate(basis):
        image = graph.sigma_cycle(b)
        for i, c in enumerate(coords(image)):
            F[i][j] = c
    lattice = CharacterLattice(F, label="H1") if rank > 0 else CharacterLattice([], label="H1")
    return basis, lattice, coords


def norm_cycle(cycle, graph):
    """Sum of the Galois orbit of the cycle (orbit length = minimal period)."""
    acc = cycle
    cur = cycle
    for _ in range(graph.galois_order):
        cur = graph.sigma_cycle(cur)
        if cur == cycle:
            break
        acc = acc + cur
    out = acc
    assert graph.sigma_cycle(out) == out
    return out


def intersection_matrix_of(graph):
    """Intersection matrix: off-diagonal entries count connecting nodes,
    diagonal entries make the rows sum to zero."""
    v = graph.num_vertices
    M = [[0] * v for _ in range(v)]
    for t, h, _ in graph.edges:
        if t == h:
            raise NotSupported("self-nodes are outside the supported families")
        M[t][h] += 1
        M[h][t] += 1
    for i in range(v):
        M[i][i] = -sum(M[i])
    return IntersectionMatrix(M)


class IntersectionMatrix:
    """Symmetric integer matrix with zero row sums, nonnegative off-diagonal
    entries, and negative diagonal."""

    def __init__(self, rows):
        M = [list(map(int, row)) for row in rows]
        v = len(M)
        if any(len(row) != v for row in M):
            raise GraphError("intersection matrix must be square")
        for i in range(v):
            for j in range(v):
                if M[i][j] != M[j][i]:
                    raise GraphError("intersection matrix must be symmetric")
                if i != j and M[i][j] < 0:
                    raise GraphError("off-diagonal entries must be nonnegative")
            if M[i][i] >= 0:
                raise GraphError("diagonal entries must be negative")
            if sum(M[i]) != 0:
                raise GraphError("rows must sum to zero")
        self.rows = M
        self.size = v

    def __repr__(self):
        return f"IntersectionMatrix({self.rows})"


class ComponentGroup:
    """Finite group of components of the special fiber of the Neron model,
    computed as homology at the degree-zero level.

    Elements are tuples of residues in the Smith coordinates; projection is
    defined for multidegree vectors of total degree zero.
    """

    def __init__(self, matrix):
        if not isinstance(matrix, IntersectionMatrix):
            matrix = IntersectionMatrix(matrix)
        self.matrix = matrix
        v = matrix.size
        # columns of M, written in the basis e_i - e_v of the degree-0 sublattice
        N = [matrix.rows[i] for i in range(v - 1)]
        U, D, V = smith_normal_form(N)
        self.diag = [D[i][i] for i in range(v - 1)]
        if any(d == 0 for d in self.diag):
            raise GraphError("special fiber is not connected (infinite group)")
        self.U = U
        self.Uinv = zmat.mat_inverse_unimodular(U)
        self.invariant_factors = sorted(d for d in self.diag if d > 1)
        self.order = 1
        for d in self.diag:
            self.order *= d

    def project(self, multidegree):
        """Class of a total-degree-zero multidegree vector."""
        deg = list(map(int, multidegree))
        if len(deg) != self.matrix.size:
            raise GraphError("multidegree length mismatch")
        if sum(deg) != 0:
            raise GraphError("projection needs total degree zero")
        y = mat_vec(self.U, deg[:-1])
        return tuple(y[i] % self.diag[i] for i in range(len(self.diag)))

    def project_with_base(self, multidegree, base_index=0):
        """Project a vector of arbitrary total degree after compensating the
        degree at the chosen base component."""
        deg = list(map(int, multidegree))
        deg[base_index] -= sum(deg)
        return self.project(deg)

    def identity(self):
        return tuple(0 for _ in self.diag)

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.diag))

    def neg(self, x):
        return tuple((-a) % d for a, d in zip(x, self.diag))

    def scale(self, x, k):
        return tuple((a * k) % d for a, d in zip(x, self.diag))

    def element_order(self, x):
        from .zmat import gcd
        n = 1
        for a, d in zip(x, self.diag):
            if a:
                n = zmat.lcm(n, d // gcd(a, d))
        return n

    def representative(self, element):
        """A total-degree-zero multidegree vector projecting to the element."""
        y = [int(a) for a in element]
        x = mat_vec(self.Uinv, y)
        return tuple(x + [-sum(x)])

    def elements(self):
        out = [()]
        for d in self.diag:
            out = [t + (r,) for t in out for r in range(d)]
        return out

    def torsion_elements(self, r):
        """All elements killed by r."""
        from .zmat import gcd
        out = [()]
        for d in self.diag:
            g = gcd(r, d)
            step = d // g
            out = [t + ((step * k) % d,) for t in out for k in range(g)]
        return out

    def generators(self):
        """(element, order) pairs generating the cyclic factors with order > 1."""
        out = []
        for i, d in enumerate(self.diag):
            if d > 1:
                e = tuple(1 if j == i else 0 for j in range(len(self.diag)))
                out.append((e, d))
        return out

    def __repr__(self):
        return f"ComponentGroup({self.invariant_factors or [1]})"


def component_group(matrix):
    return ComponentGroup(matrix)


def phi_torsion_representatives(phi, r):
    """One total-degree-zero multidegree representative per element of the
    r-torsion subgroup."""
    if r < 1:
        raise GraphError("torsion order must be positive")
    return [(el, phi.representative(el)) for el in phi.torsion_elements(r)]


def fibral_lattice_membership(deg, r, matrix):
    """True iff deg lies in r*Z^v + (row span of the intersection matrix),
    decided by solving M t = deg mod r."""
    if not isinstance(matrix, IntersectionMatrix):
        matrix = IntersectionMatrix(matrix)
    deg = list(map(int, deg))
    if len(deg) != matrix.size:
        raise GraphError("multidegree length mismatch")
    if r == 1:
        return True
    return zmat.solve_mod(matrix.rows, deg, r) is not None


# ---------------------------------------------------------------------------
# principal generators for the supported graph shapes


def principal_cycle_generators(graph, basis=None, lattice=None, coords=None):
    """Generator cycles of a principal decomposition of the cycle lattice.

    Supported shapes: trivial Galois action on the cycle space (split torus,
    one generator per basis cycle); two-vertex graphs with either a rational
    node or a single full edge orbit.  Anything else raises NotSupported,
    mirroring the open gap for graphs without a distinguished rational node.
    """
    if basis is None:
        basis, lattice, coords = h1_basis(graph)
    if lattice.rank == 0:
        return []
    if all(graph.sigma_cycle(b) == b for b in basis):
        return list(basis)
    if graph.num_vertices == 2:
        return _banana_generators(graph)
    raise NotSupported("no principal decomposition rule for this graph")


def _banana_generators(graph):
    orbits = graph.edge_orbits()
    if any(graph.edges[i][0] == graph.edges[i][1] for i in range(graph.num_edges)):
        raise NotSupported("self-nodes are outside the supported families")
    # normalize orientation bookkeeping: cycles are differences of edges
    fixed = [orb[0] for orb in orbits if len(orb) == 1]
    if fixed:
        base = min(fixed, key=lambda i: graph.edges[i][2])
        generators = []
        for orb in orbits:
            rep = orb[0]
            if rep == base and len(orb) == 1:
                continue
            generators.append(_edge_difference(graph, rep, base))
        return generators
    if len(orbits) == 1 and len(orbits[0]) == graph.num_edges:
        orb = orbits[0]
        return [_edge_difference(graph, orb[1], orb[0])]
    raise NotSupported("no rational node and several edge orbits")


def _edge_difference(graph, e1, e0):
    """The cycle e1 - e0 for two edges joining the same vertex pair."""
    vec = [0] * graph.num_edges
    t1, h1, _ = graph.edges[e1]
    t0, h0, _ = graph.edges[e0]
    vec[e1] += 1
    if (t0, h0) == (t1, h1):
        vec[e0] -= 1
    elif (t0, h0) == (h1, t1):
        vec[e0] += 1
    else:
        raise NotSupported("edges do not join the same component pair")
    return Cycle(graph, vec)


def chain_decomposition(cycle):
    """Decompose a cycle into closed walks.

    Each walk is a list of (vertex, enter_edge, leave_edge) occurrences; a
    walk through vertices v0 -> v1 -> ... -> v0 records, for every visited
    vertex, the node by which the walk arrives and the node by which it
    leaves.  Arcs are consumed deterministically in (label, direction) order.
    """
    graph = cycle.graph
    arcs = []  # (from_vertex, to_vertex, edge_index)
    for i, c in enumerate(cycle.vector):
        t, h, _ = graph.edges[i]
        if c > 0:
            arcs.extend([(t, h, i)] * c)
        elif c < 0:
            arcs.extend([(h, t, i)] * (-c))
    arcs.sort(key=lambda a: (graph.edges[a[2]][2], a[0]))
    unused = list(range(len(arcs)))
    walks = []
    while unused:
        start = unused[0]
        path = [arcs[start]]
        unused.remove(start)
        while path[-1][1] != path[0][0]:
            v = path[-1][1]
            nxt = next((k for k in unused if arcs[k][0] == v), None)
            if nxt is None:
                raise GraphError("cycle vector does not decompose into closed walks")
            path.append(arcs[nxt])
            unused.remove(nxt)
        # path is a closed arc sequence; record per-vertex occurrences
        walk = []
        n = len(path)
        for idx in range(n):
            enter_edge = path[idx - 1][2]
            vertex = path[idx][0]
            leave_edge = path[idx][2]
            walk.append((vertex, enter_edge, leave_edge))
        walks.append(walk)
    return walks
