"""Minimal free resolutions over F3[P] for finite 3-groups P.

Only the dimensions dim_F3 H^n(P, F3) are produced: over the local ring
F3[P] a minimal resolution has differentials with entries in the
augmentation ideal, so H^n is the free rank of the n-th term.  Groups
arrive as permutation data: a multiplication table index set with a
distinguished generating set.  The inflation maps along a surjection of
groups are computed by lifting a chain map into the pulled-back
resolution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg


@dataclass
class PermGroup:
    """A finite group as its full multiplication table plus generators."""

    mult: np.ndarray        # (p, p) index table, mult[i, j] = i * j
    identity: int
    gens: list              # generator indices

    @property
    def order(self) -> int:
        return self.mult.shape[0]

    def left_perm(self, g: int) -> np.ndarray:
        return self.mult[g, :]


def group_from_indices(fq, indices: np.ndarray, gen_indices: list) -> PermGroup:
    """Relabel a subgroup of a FiniteQuotient as 0..p-1 with its table."""
    indices = np.asarray(sorted(int(i) for i in indices), dtype=np.int64)
    pos = {int(g): i for i, g in enumerate(indices)}
    p = len(indices)
    mult = np.empty((p, p), dtype=np.int64)
    for i, g in enumerate(indices):
        row = fq.mul(np.full(p, g, dtype=np.int64), indices)
        mult[i, :] = [pos[int(x)] for x in row]
    ident = pos[fq.identity_index()]
    gens = [pos[int(g)] for g in gen_indices]
    return PermGroup(mult, ident, gens)


def _act_vector(G: PermGroup, g: int, v: np.ndarray, rank: int) -> np.ndarray:
    """Left action of g on F3[P]^rank, coordinates blocked as (rank, p)."""
    p = G.order
    perm = G.left_perm(g)
    out = np.zeros_like(v)
    blocks = v.reshape(rank, p)
    res = out.reshape(rank, p)
    res[:, perm] = blocks
    return out


def _act_rows(G: PermGroup, g: int, rows: np.ndarray, rank: int) -> np.ndarray:
    p = G.order
    perm = G.left_perm(g)
    out = np.zeros_like(rows)
    blocks = rows.reshape(rows.shape[0], rank, p)
    res = out.reshape(rows.shape[0], rank, p)
    res[:, :, perm] = blocks
    return out


def _module_span_closure(G: PermGroup, vecs: np.ndarray, rank: int) -> np.ndarray:
    """F3-basis of the F3[P]-submodule generated by the given vectors."""
    if vecs.size == 0:
        return vecs
    space = linalg.F3Space(vecs.shape[1])
    space.add(vecs % 3)
    frontier = space.rows.copy()
    while frontier.size:
        fresh = []
        for g in G.gens:
            moved = _act_rows(G, g, frontier, rank)
            reduced = space.reduce(moved)
            keep = reduced[reduced.any(axis=1)]
            if keep.size:
                before = space.dim
                space.add(keep)
                if space.dim > before:
                    fresh.append(space.rows[before:])
        frontier = np.vstack(fresh) if fresh else np.zeros((0, vecs.shape[1]), dtype=np.int64)
    return space.rows


@dataclass
class MinimalResolution:
    group: PermGroup
    ranks: list             # dim H^n for n = 0..n_max
    diffs: list             # F3 matrices d_n : F_n -> F_{n-1}, n >= 1
    generators: list        # chosen minimal generator vectors per stage


def minimal_resolution(G: PermGroup, n_max: int) -> MinimalResolution:
    p = G.order
    ranks = [1]
    diffs = []
    gens_per_stage = []
    # d_0: augmentation F3[P] -> F3
    prev_rank = 1
    d_prev = np.ones((1, p), dtype=np.int64)
    for n in range(1, n_max + 1):
        K = linalg.kernel(d_prev, 1)
        # IK: submodule generated by (g - 1) K
        ik_gens = []
        for g in G.gens:
            ik_gens.append((_act_rows(G, g, K, prev_rank) - K) % 3)
        IK = (
            _module_span_closure(G, np.vstack(ik_gens), prev_rank)
            if ik_gens
            else np.zeros((0, K.shape[1]), dtype=np.int64)
        )
        space = linalg.F3Space(K.shape[1])
        space.add(IK)
        new_gens = []
        for v in K:
            if not space.contains(v):
                new_gens.append(v)
                space.add(v[None, :])
        r = len(new_gens)
        ranks.append(r)
        gens_per_stage.append(new_gens)
        # d_n as an F3 matrix (p*prev_rank) x (p*r)
        d = np.zeros((p * prev_rank, p * r), dtype=np.int64)
        for j, v in enumerate(new_gens):
            for g in range(p):
                d[:, j * p + g] = _act_vector(G, g, v, prev_rank)
        diffs.append(d)
        d_prev = d
        prev_rank = r
    return MinimalResolution(G, ranks, diffs, gens_per_stage)


def cohomology_dims(G: PermGroup, n_max: int) -> list:
    return minimal_resolution(G, n_max).ranks[: n_max + 1]


def _block_augment(v: np.ndarray, p: int, rank: int) -> np.ndarray:
    """Coinvariant reduction F3[P]^rank -> F3^rank (sum each block)."""
    return v.reshape(rank, p).sum(axis=1) % 3


def inflation_matrices(
    res_big: MinimalResolution,
    res_small: MinimalResolution,
    proj: np.ndarray,
    n_max: int,
) -> list:
    """Inflation H^n(P_small) -> H^n(P_big) along a surjection P_big -> P_small.

    proj[i] is the image in P_small of element i of P_big.  Returns, per
    n, the matrix of the inflation with respect to the minimal-generator
    bases (shape r_small x r_big after dualization; entry [i, j] pairs
    small-generator i with big-generator j).
    """
    Gb, Gs = res_big.group, res_small.group
    pb, ps = Gb.order, Gs.order

    def push(v: np.ndarray, rank: int) -> np.ndarray:
        """F3[P_big]^rank -> F3[P_small]^rank along proj (sum over fibers)."""
        out = np.zeros(rank * ps, dtype=np.int64)
        vb = v.reshape(rank, pb)
        vs = out.reshape(rank, ps)
        np.add.at(vs, (slice(None), proj), vb)
        return out % 3

    # chain map phi_n : F_n(big) -> C_n = pullback of F_n(small);
    # phi_0 = push; each next stage solves d_small x = phi(d_big e_j)
    mats = []

    def phi0(v):
        return push(v, 1)

    phis = [phi0]
    for n in range(1, n_max + 1):
        d_big = res_big.diffs[n - 1]
        d_small = res_small.diffs[n - 1]
        r_big = res_big.ranks[n]
        r_small = res_small.ranks[n]
        prev = phis[n - 1]
        gen_images = []
        for j in range(r_big):
            e = np.zeros(d_big.shape[1], dtype=np.int64)
            e[j * pb] = 1  # identity-translate of generator j
            target = prev((d_big @ e) % 3)
            x = linalg.solve(d_small, target, 1)
            if x is None:
                raise RuntimeError("chain lift failed; pullback complex not exact")
            gen_images.append(x)

        def phi_n(v, gen_images=gen_images, r_big=r_big, r_small=r_small):
            out = np.zeros(gen_images[0].shape[0] if gen_images else 0, dtype=np.int64)
            vb = v.reshape(r_big, pb)
            for j in range(r_big):
                img = gen_images[j].reshape(r_small, ps)
                for g in np.nonzero(vb[j])[0]:
                    coef = vb[j, g]
                    # g acts through its image in the small group
                    gs = proj[g]
                    perm = Gs.left_perm(int(gs))
                    moved = np.zeros_like(img)
                    moved[:, perm] = img
                    out = (out + coef * moved.ravel()) % 3
            return out

        phis.append(phi_n)
        # inflation pairing: coinvariant classes of the generator images
        mat = np.zeros((r_small, r_big), dtype=np.int64)
        for j, x in enumerate(gen_images):
            mat[:, j] = _block_augment(x, ps, r_small)
        mats.append(mat % 3)
    return mats


def target_poincare_dims(n_max: int) -> list:
    """dim H^n of the detected limit cohomology: coefficients of
    (1 + 2t + 2t^2 + 2t^3 + t^4) / (1 - t^2)."""
    num = [1, 2, 2, 2, 1]
    out = []
    for n in range(n_max + 1):
        total = sum(num[k] for k in range(n % 2, min(n, 4) + 1, 2))
        out.append(total)
    return out
