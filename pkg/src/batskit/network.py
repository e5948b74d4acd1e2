"""Line-network packet erasure simulation with RLNC recoding at relays.

Packets are tracked as coefficient vectors relative to the M outer-coded
symbols of one batch; the destination's collected vectors form the batch
transfer matrix H.  Payloads are never simulated: decoders only consume
(G, H, Y) and Y is reproducible from the intermediate symbols.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from batskit.code_model import RankDistribution, TannerGraph, bats_encode
from batskit.gf import get_field


@dataclass(frozen=True)
class NetworkSpec:
    """Line network: `hops` links in series, each erasing packets i.i.d.

    erasure may be a single probability or one per link.  Every relay
    collects the surviving packets of a batch and retransmits
    per_batch_tx fresh uniform random combinations (default M).
    """

    hops: int
    erasure: float | tuple
    per_batch_tx: int | None = None

    def __post_init__(self):
        if self.hops < 1:
            raise ValueError("need at least one link")
        eps = self.link_erasures()
        if len(eps) != self.hops or any(not 0 <= e <= 1 for e in eps):
            raise ValueError("erasure probabilities must lie in [0, 1], one per link")

    def link_erasures(self) -> tuple:
        if np.isscalar(self.erasure):
            return (float(self.erasure),) * self.hops
        return tuple(float(e) for e in self.erasure)


@dataclass(frozen=True)
class TransferSample:
    """End-to-end transfer matrix of one batch and its cached rank."""

    H: np.ndarray
    rank: int


def simulate_transfer(net: NetworkSpec, M: int, q: int, rng: np.random.Generator) -> TransferSample:
    """One batch through the line network.

    The source emits the batch's M coded packets (identity coefficient
    vectors); each relay recodes its survivors into per_batch_tx totally
    random combinations.  H is the M x N_dest matrix of coefficient
    vectors that survive the last link.
    """
    gf = get_field(q)
    ntx = net.per_batch_tx or M
    coeffs = np.eye(M, dtype=np.uint8)
    for i, eps in enumerate(net.link_erasures()):
        keep = rng.random(coeffs.shape[1]) >= eps
        coeffs = coeffs[:, keep]
        if i + 1 < net.hops:
            # relay: fresh uniform combinations of what it received
            R = gf.random_matrix(coeffs.shape[1], ntx, rng)
            coeffs = gf.mat_mul(coeffs, R)
    return TransferSample(coeffs, gf.mat_rank(coeffs))


def estimate_rank_distribution(net: NetworkSpec, M: int, q: int, trials: int,
                               rng: np.random.Generator) -> RankDistribution:
    """Normalized rank histogram of simulate_transfer over `trials` batches."""
    if trials < 1:
        raise ValueError("need at least one trial")
    counts = np.zeros(M + 1, dtype=np.int64)
    for _ in range(trials):
        counts[simulate_transfer(net, M, q, rng).rank] += 1
    return RankDistribution(counts / trials)


def transmit_instance(graph: TannerGraph, v: np.ndarray, rng: np.random.Generator,
                      net: NetworkSpec | None = None):
    """Send the encoded batches of `graph` to the destination.

    Returns (graph_out, Y): with a NetworkSpec each batch's transfer matrix
    is replaced by a simulated one; otherwise (h-direct mode) the rank-law
    matrices already attached by the graph sampler are used as-is.
    """
    gf = get_field(graph.q)
    if net is not None:
        M = graph.batches[0].H.shape[0] if graph.batches else 0
        batches = [replace(b, H=simulate_transfer(net, M, graph.q, rng).H) for b in graph.batches]
        graph = TannerGraph(graph.K, graph.q, batches, graph.lcns)
    X = bats_encode(graph, v)
    Y = [gf.vec_mat(x, b.H) for x, b in zip(X, graph.batches)]
    return graph, Y
