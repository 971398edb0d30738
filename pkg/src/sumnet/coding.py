"""Scalar and vector linear network codes for sum-networks.

A code fixes a source coefficient for every edge leaving a source and a
local coefficient for every (incoming edge, outgoing edge) pair at a
non-source node. With N > 1 each coefficient is an N x N matrix and each
message is a length-N vector. Terminal decoders are never part of the code;
they are solved for.
"""

from __future__ import annotations

import json
import random
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field as dc_field

from .field import FieldMatrix, FieldSpec, parse_field, solve_linear
from .network import SOURCE, Network


class CodeError(ValueError):
    """Code does not fit its network."""


def beta_pairs(net: Network) -> list[tuple[int, int]]:
    """All (in-edge, out-edge) adjacencies at non-source nodes.

    Ordered by out-edge index, then in-edge index.
    """
    pairs = []
    for out, (tail, _) in enumerate(net.edges):
        if net.role[tail] != SOURCE:
            pairs.extend((i, out) for i in net.in_edges[tail])
    return pairs


def alpha_edges(net: Network) -> list[int]:
    return [i for i, (tail, _) in enumerate(net.edges) if net.role[tail] == SOURCE]


@dataclass(frozen=True)
class LinearCode:
    field: FieldSpec
    dim: int
    alpha: Mapping[int, FieldMatrix]
    beta: Mapping[tuple[int, int], FieldMatrix]

    def validate(self, net: Network) -> None:
        want_a, want_b = set(alpha_edges(net)), set(beta_pairs(net))
        if set(self.alpha) != want_a:
            raise CodeError(f"alpha keys {sorted(self.alpha)} != source edges {sorted(want_a)}")
        if set(self.beta) != want_b:
            raise CodeError("beta keys do not match the relay adjacencies of the network")
        for mat in (*self.alpha.values(), *self.beta.values()):
            if mat.field != self.field or mat.shape != (self.dim, self.dim):
                raise CodeError(f"coefficient {mat} is not {self.dim}x{self.dim} over {self.field}")


def identity_code(net: Network, field: FieldSpec, dim: int = 1) -> LinearCode:
    """Every coefficient set to the identity matrix."""
    eye = FieldMatrix.identity(field, dim)
    return LinearCode(field, dim, {e: eye for e in alpha_edges(net)}, {pr: eye for pr in beta_pairs(net)})


def constant_code(net: Network, field: FieldSpec, dim: int, value: int) -> LinearCode:
    mat = FieldMatrix.scalar(field, dim, value)
    return LinearCode(field, dim, {e: mat for e in alpha_edges(net)}, {pr: mat for pr in beta_pairs(net)})


def random_code(net: Network, field: FieldSpec, dim: int, rng: random.Random) -> LinearCode:
    q = field.order

    def rand():
        return FieldMatrix(field, dim, dim, tuple(rng.randrange(q) for _ in range(dim * dim)))

    return LinearCode(field, dim, {e: rand() for e in alpha_edges(net)}, {pr: rand() for pr in beta_pairs(net)})


def _as_column(field: FieldSpec, dim: int, value) -> FieldMatrix:
    if isinstance(value, FieldMatrix):
        col = value
    else:
        col = FieldMatrix.column(field, list(value))
    if col.shape != (dim, 1):
        raise ValueError(f"message has shape {col.shape}, expected ({dim}, 1)")
    return col


def propagate(net: Network, code: LinearCode, inputs: Mapping[str, Sequence[int] | FieldMatrix]) -> list[FieldMatrix]:
    """Message carried by every edge, as length-N columns indexed by edge."""
    missing = set(net.sources) - set(inputs)
    if missing:
        raise ValueError(f"no input for sources {sorted(missing)}")
    x = {s: _as_column(code.field, code.dim, inputs[s]) for s in net.sources}
    y: list[FieldMatrix | None] = [None] * len(net.edges)
    for e in net.edge_topo_order:
        tail = net.edges[e][0]
        if net.role[tail] == SOURCE:
            y[e] = code.alpha[e] @ x[tail]
        else:
            acc = FieldMatrix.zeros(code.field, code.dim, 1)
            for i in net.in_edges[tail]:
                acc = acc + code.beta[(i, e)] @ y[i]
            y[e] = acc
    return y


@dataclass(frozen=True)
class TransferVector:
    """Per-edge coefficient of each source message.

    ``by_edge[e][j]`` is the N x N matrix multiplying the message of
    ``sources[j]`` in the content of edge ``e``.
    """

    sources: tuple[str, ...]
    by_edge: tuple[tuple[FieldMatrix, ...], ...] = dc_field(repr=False)

    def apply(self, edge: int, inputs: Mapping[str, FieldMatrix]) -> FieldMatrix:
        coeffs = self.by_edge[edge]
        acc = coeffs[0] @ inputs[self.sources[0]]
        for mat, s in zip(coeffs[1:], self.sources[1:]):
            acc = acc + mat @ inputs[s]
        return acc


def transfer(net: Network, code: LinearCode) -> TransferVector:
    """Symbolic propagation of coefficient matrices in topological order."""
    f, n = code.field, code.dim
    zero = FieldMatrix.zeros(f, n)
    src_index = {s: j for j, s in enumerate(net.sources)}
    m = len(net.sources)
    rows: list[tuple[FieldMatrix, ...] | None] = [None] * len(net.edges)
    for e in net.edge_topo_order:
        tail = net.edges[e][0]
        if net.role[tail] == SOURCE:
            vec = [zero] * m
            vec[src_index[tail]] = code.alpha[e]
        else:
            vec = [zero] * m
            for i in net.in_edges[tail]:
                b = code.beta[(i, e)]
                if b.is_zero():
                    continue
                vec = [acc + b @ t if not t.is_zero() else acc for acc, t in zip(vec, rows[i])]
        rows[e] = tuple(vec)
    return TransferVector(net.sources, tuple(rows))


@dataclass(frozen=True)
class DecoderSpec:
    """Decoding matrices per terminal, keyed by incoming edge index."""

    gamma: Mapping[str, Mapping[int, FieldMatrix]]


@dataclass(frozen=True)
class Undecodable:
    """No decoder exists for this code; lists the failing terminals."""

    terminals: tuple[str, ...]

    def __bool__(self):
        return False


def all_ones_decoder(net: Network, field: FieldSpec, dim: int = 1) -> DecoderSpec:
    eye = FieldMatrix.identity(field, dim)
    return DecoderSpec({t: {e: eye for e in net.in_edges[t]} for t in net.terminals})


def _decode_terminal(net: Network, tv: TransferVector, code: LinearCode, t: str) -> dict[int, FieldMatrix] | None:
    f, n = code.field, code.dim
    ins = net.in_edges[t]
    m = len(tv.sources)
    if not ins:
        return {} if m == 0 else None
    # Rows of the stacked gamma satisfy  g . M = (e_r, ..., e_r)  where M has
    # block (edge, source) = T_e[j]; solve the transposed system per row.
    mt_rows = []
    for j in range(m):
        for c in range(n):
            row = []
            for e in ins:
                mat = tv.by_edge[e][j]
                row.extend(mat.data[s * n + c] for s in range(n))
            mt_rows.append(row)
    mt = FieldMatrix.from_rows(f, mt_rows)
    gamma_rows = []
    for r in range(n):
        rhs = FieldMatrix.column(f, [int(c == r) for _ in range(m) for c in range(n)])
        sol = solve_linear(mt, rhs)
        if sol is None:
            return None
        gamma_rows.append([v[0] for v in sol.x.to_rows()])
    out = {}
    for k, e in enumerate(ins):
        out[e] = FieldMatrix.from_rows(f, [g[k * n:(k + 1) * n] for g in gamma_rows])
    return out


def solve_decoders(net: Network, code: LinearCode, tv: TransferVector | None = None) -> DecoderSpec | Undecodable:
    """Solve each terminal's decoder so that it outputs the sum of all sources."""
    tv = tv or transfer(net, code)
    gamma, failed = {}, []
    for t in net.terminals:
        g = _decode_terminal(net, tv, code, t)
        if g is None:
            failed.append(t)
        else:
            gamma[t] = g
    if failed:
        return Undecodable(tuple(failed))
    return DecoderSpec(gamma)


def decode(net: Network, code: LinearCode, dec: DecoderSpec, y: Sequence[FieldMatrix]) -> dict[str, FieldMatrix]:
    """Terminal outputs given the per-edge messages ``y``."""
    out = {}
    for t in net.terminals:
        acc = FieldMatrix.zeros(code.field, code.dim, 1)
        for e in net.in_edges[t]:
            acc = acc + dec.gamma[t][e] @ y[e]
        out[t] = acc
    return out


def symbolic_sum_check(net: Network, code: LinearCode, dec: DecoderSpec, tv: TransferVector | None = None) -> bool:
    tv = tv or transfer(net, code)
    eye = FieldMatrix.identity(code.field, code.dim)
    zero = FieldMatrix.zeros(code.field, code.dim)
    for t in net.terminals:
        g = dec.gamma.get(t, {})
        if set(g) != set(net.in_edges[t]):
            return False
        for j in range(len(tv.sources)):
            acc = zero
            for e in net.in_edges[t]:
                acc = acc + g[e] @ tv.by_edge[e][j]
            if acc != eye:
                return False
    return True


def verify_sum_code(net: Network, code: LinearCode, dec: DecoderSpec, trials: int = 100, seed: int = 0) -> bool:
    """Symbolic check plus ``trials`` random evaluations; both must pass."""
    code.validate(net)
    tv = transfer(net, code)
    symbolic = symbolic_sum_check(net, code, dec, tv)
    rng = random.Random(seed)
    f, n, q = code.field, code.dim, code.field.order
    empirical = True
    for _ in range(trials):
        x = {s: FieldMatrix(f, n, 1, tuple(rng.randrange(q) for _ in range(n))) for s in net.sources}
        total = FieldMatrix.zeros(f, n, 1)
        for v in x.values():
            total = total + v
        try:
            outs = decode(net, code, dec, propagate(net, code, x))
        except KeyError:
            empirical = False
            break
        if any(o != total for o in outs.values()):
            empirical = False
            break
    return symbolic and empirical


# -- code files ---------------------------------------------------------------


def code_to_dict(code: LinearCode) -> dict:
    return {
        "field": code.field.designation,
        "N": code.dim,
        "alpha": [[e, code.alpha[e].to_rows()] for e in sorted(code.alpha)],
        "beta": [[i, o, code.beta[(i, o)].to_rows()] for i, o in sorted(code.beta, key=lambda k: (k[1], k[0]))],
    }


def code_from_dict(doc: dict, net: Network | None = None) -> LinearCode:
    field = parse_field(doc["field"])
    dim = int(doc["N"])
    alpha = {int(e): FieldMatrix.from_rows(field, m) for e, m in doc["alpha"]}
    beta = {(int(i), int(o)): FieldMatrix.from_rows(field, m) for i, o, m in doc["beta"]}
    code = LinearCode(field, dim, alpha, beta)
    if net is not None:
        code.validate(net)
    return code


def dump_code(code: LinearCode) -> str:
    return json.dumps(code_to_dict(code), indent=2) + "\n"


def load_code(text: str, net: Network | None = None) -> LinearCode:
    return code_from_dict(json.loads(text), net)


def decoders_to_list(dec: DecoderSpec) -> list:
    return [[t, [[e, g[e].to_rows()] for e in sorted(g)]] for t, g in dec.gamma.items()]
