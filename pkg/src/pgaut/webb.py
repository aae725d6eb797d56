"""Webb's two homomorphisms on the centre of a maximal subgroup and the
non-inner automorphism criterion they decide."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import Group
from .structure import (
    StructureError,
    Subgroup,
    center,
    center_of_subgroup,
    intersect,
    is_abelian_group,
    subgroup_from_mask,
)


@dataclass(eq=False)
class WebbMaps:
    """tau(m) = g^-p (gm)^p and gamma(m) = [m, g] on Z(M), for a maximal
    subgroup M and a generator g of G/M."""

    group: Group
    maximal: Subgroup
    rep: int
    domain: np.ndarray
    tau_values: np.ndarray
    gamma_values: np.ndarray
    im_tau: Subgroup
    ker_tau: Subgroup
    im_gamma: Subgroup
    ker_gamma: Subgroup


def _subgroup_from_elements(G: Group, els: np.ndarray) -> Subgroup:
    mask = np.zeros(G.size, dtype=bool)
    mask[els] = True
    sub = subgroup_from_mask(G, mask)
    return sub


def _verify_hom_on_domain(G: Group, dom: np.ndarray, values: np.ndarray, what: str):
    """Exhaustive check that m -> values[m] is a homomorphism on the
    subgroup with element list dom."""
    pos = np.full(G.size, -1, dtype=np.int64)
    pos[dom] = np.arange(dom.size)
    prod = G.mult[np.ix_(dom, dom)]
    if (pos[prod] < 0).any():
        raise StructureError(f"{what}: domain is not closed")
    lhs = values[pos[prod]]
    rhs = G.mult[values[:, None], values[None, :]]
    if not np.array_equal(lhs, rhs):
        raise StructureError(f"{what} is not a homomorphism")


def webb_maps(G: Group, M: Subgroup, rep: int | None = None) -> WebbMaps:
    """Both maps with their images and kernels, verified to be
    homomorphisms pairwise-exhaustively, with the containments
    im gamma <= ker tau and im tau <= ker gamma = Z(G) meet M checked.

    The kernel and image sizes do not depend on the choice of generator
    for G/M; this is re-verified against a second representative.
    """
    if is_abelian_group(G):
        raise StructureError("the maps need a non-abelian group")
    if M.order * G.p != G.size or not M.is_normal():
        raise StructureError("need a maximal subgroup")
    outside = np.flatnonzero(~M.mask)
    g = int(outside[0]) if rep is None else rep
    if M.mask[g]:
        raise StructureError("representative lies inside the subgroup")
    ZM = center_of_subgroup(M)
    dom = ZM.elements()

    def compute(gg: int):
        gp = int(G.pow_table(G.p)[gg])
        tau = G.mult[G.inv[gp], G.pow_table(G.p)[G.mult[gg, dom]]]
        conj = G.mult[G.mult[G.inv[gg], dom], gg]
        gamma = G.mult[G.inv[dom], conj]
        return tau, gamma

    tau, gamma = compute(g)
    _verify_hom_on_domain(G, dom, tau, "tau")
    _verify_hom_on_domain(G, dom, gamma, "gamma")

    im_tau = _subgroup_from_elements(G, np.unique(tau))
    im_gamma = _subgroup_from_elements(G, np.unique(gamma))
    ker_tau = _subgroup_from_elements(G, dom[tau == 0])
    ker_gamma = _subgroup_from_elements(G, dom[gamma == 0])

    if not im_gamma <= ker_tau:
        raise StructureError("im gamma escapes ker tau")
    if not im_tau <= ker_gamma:
        raise StructureError("im tau escapes ker gamma")
    if ker_gamma != intersect(center(G), M):
        raise StructureError("ker gamma differs from the central part of M")

    for g2 in outside[1:].tolist():
        if g2 == g:
            continue
        tau2, gamma2 = compute(int(g2))
        same = (
            np.unique(tau2).size == im_tau.order
            and np.unique(gamma2).size == im_gamma.order
            and int((tau2 == 0).sum()) == ker_tau.order
            and int((gamma2 == 0).sum()) == ker_gamma.order
        )
        if not same:
            raise StructureError("map sizes depend on the coset representative")
        break

    return WebbMaps(
        group=G, maximal=M, rep=g, domain=dom,
        tau_values=tau, gamma_values=gamma,
        im_tau=im_tau, ker_tau=ker_tau,
        im_gamma=im_gamma, ker_gamma=ker_gamma,
    )


@dataclass(frozen=True)
class WebbCriterion:
    """Verdict of the criterion on one maximal subgroup, with the
    automorphism oracle's answer alongside."""

    group_name: str
    maximal_order: int
    verdict: bool
    im_tau_order: int
    ker_gamma_order: int
    predicted_out: int | None
    oracle_out: int
    oracle_aut_order: int

    @property
    def agrees(self) -> bool:
        if self.verdict:
            return self.oracle_out == self.predicted_out and self.oracle_out > 1
        return self.oracle_out == 1


def webb_criterion(G: Group, M: Subgroup) -> WebbCriterion:
    """A non-inner automorphism of p-power order trivial on G/M and on M
    exists iff im tau differs from ker gamma; when it does, the outer
    classes of such automorphisms number |ker gamma| / |im tau|.  Both
    claims are compared against the exhaustive automorphism oracle.
    """
    from .automorphism import restricted_aut

    if not center(G) <= M:
        raise StructureError("criterion needs the centre inside the maximal")
    maps = webb_maps(G, M)
    verdict = maps.im_tau != maps.ker_gamma
    predicted = maps.ker_gamma.order // maps.im_tau.order if verdict else None
    ra = restricted_aut(G, M, M)
    return WebbCriterion(
        group_name=G.name,
        maximal_order=M.order,
        verdict=verdict,
        im_tau_order=maps.im_tau.order,
        ker_gamma_order=maps.ker_gamma.order,
        predicted_out=predicted,
        oracle_out=ra.out_image_order,
        oracle_aut_order=ra.order,
    )


@dataclass(frozen=True)
class TauBranch:
    """How tau on Z(M) behaves for a maximal from a central-product pair."""

    group_name: str
    maximal_order: int
    im_tau_order: int
    branch: str
    centre_in_kernel: bool
    zm_over_z_index: int


def tau_for_mueller_pair(G: Group, M: Subgroup, N: Subgroup) -> TauBranch:
    """For maximals with G = Z(M)N and Z(G) = Z(M) meet N, the map tau on
    Z(M) kills Z(G) and has image of order at most p."""
    ZM = center_of_subgroup(M)
    Z = center(G)
    if intersect(ZM, N) != Z:
        raise StructureError("pair fails Z(M) meet N = Z(G)")
    if ZM.order * N.order != G.size * Z.order:
        raise StructureError("pair fails G = Z(M) N")
    maps = webb_maps(G, M)
    kernel_ok = bool(maps.tau_values[Z.mask[maps.domain]].max(initial=0) == 0)
    im = maps.im_tau.order
    if im > G.p:
        raise StructureError("im tau too large for a product pair")
    branch = "im-trivial" if im == 1 else "im-cyclic-p"
    return TauBranch(
        group_name=G.name,
        maximal_order=M.order,
        im_tau_order=im,
        branch=branch,
        centre_in_kernel=kernel_ok,
        zm_over_z_index=ZM.order // Z.order,
    )
