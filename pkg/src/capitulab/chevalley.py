"""Ambiguous-class-number formulas, filtration ledgers and stability.

The central law: in a cyclic p-extension L/K of degree p**n with
ramification indices e_q and unit-norm index i,

    #H_L^G = #H_K * prod(e_q) / (p**n * i),

always an integer in the totally ramified case.  Non-integral inputs
are hard errors (they certify inconsistent fixture data, never a
rounding situation).  The filtration ledger tracks the quotient orders
#(H^{i+1}/H^i) = #H_K / #N(H^i) of the r = 1 specialization.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .arith import divisors, valuation
from .abgroup import FinAbGroup, torsion_subgroup


def _is_power_of(n: int, p: int) -> bool:
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class ChevalleyInput:
    """Inputs of the ambiguous-class formula; p is carried explicitly so
    the p-power invariants can be checked."""

    p: int
    n: int
    hK: int
    ram: tuple[int, ...]
    norm_index: int = 1

    def __post_init__(self):
        object.__setattr__(self, "ram", tuple(int(e) for e in self.ram))
        if self.n < 1:
            raise ValueError("tower exponent n must be >= 1")
        pn = self.p**self.n
        for e in self.ram:
            if not _is_power_of(e, self.p) or pn % e != 0:
                raise ValueError(f"ramification index {e} is not a p-power dividing p^n")
        if not _is_power_of(self.norm_index, self.p):
            raise ValueError("norm index must be a p-power")
        if self.ram:
            prod = 1
            for e in self.ram:
                prod *= e
            if prod % pn != 0 or (prod // pn) % self.norm_index != 0:
                raise ValueError(
                    "norm index must divide prod(e_q)/p^n (integrality of the formula)"
                )


def ambiguous_number(inp: ChevalleyInput) -> int:
    """#H_L^G from the fixed-point formula; errors on non-integral input."""
    num = inp.hK
    for e in inp.ram:
        num *= e
    den = inp.p**inp.n * inp.norm_index
    if num % den:
        raise ArithmeticError(f"ambiguous-class formula non-integral: {num}/{den}")
    return num // den


def ambiguous_number_hilbert_overlap(
    hK: int, deg_overlap: int, p: int, n: int, ram: tuple[int, ...] = (), norm_index: int = 1
) -> int:
    """Variant when L meets the unramified p-Hilbert field in degree deg_overlap."""
    pn = p**n
    if hK % deg_overlap or pn % deg_overlap:
        raise ValueError("overlap degree must divide both #H_K and p^n")
    num = hK // deg_overlap
    for e in ram:
        num *= e
    den = (pn // deg_overlap) * norm_index
    if num % den:
        raise ArithmeticError(f"overlap formula non-integral: {num}/{den}")
    return num // den


def filtration_step(hK: int, norm_image_order: int) -> int:
    """#(H^{i+1}/H^i) = #H_K / #N(H^i) in the r = 1 case."""
    if hK % norm_image_order:
        raise ArithmeticError(f"norm image order {norm_image_order} does not divide {hK}")
    return hK // norm_image_order


@dataclass(frozen=True)
class FiltrationLedger:
    hK: int
    norm_image_orders: tuple[int, ...]
    steps: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        orders = tuple(int(o) for o in self.norm_image_orders)
        object.__setattr__(self, "norm_image_orders", orders)
        if not orders or orders[0] != 1:
            raise ValueError("norm image orders must start at 1 (N of the trivial step)")
        steps = []
        prev = None
        for o in orders:
            s = filtration_step(self.hK, o)
            if prev is not None and s > prev:
                raise ValueError("steps must be non-increasing")
            steps.append(s)
            prev = s
        if steps[-1] != 1:
            raise ValueError("ledger must terminate with step 1 (norm image = H_K)")
        object.__setattr__(self, "steps", tuple(steps))

    @property
    def hL(self) -> int:
        prod = 1
        for s in self.steps:
            prod *= s
        return prod


def simulate_filtration(HK: FinAbGroup, n: int, seed=None, forced_norm_orders=None) -> FiltrationLedger:
    """Random admissible ledger over divisor chains of #H_K.

    The distribution is uniform over strictly increasing divisor chains;
    any sampler satisfying the ledger invariants is admissible, and a
    forced chain can be supplied for deterministic replays.
    """
    hK = HK.order
    if forced_norm_orders is not None:
        return FiltrationLedger(hK, (1,) + tuple(forced_norm_orders))
    rng = random.Random(seed)
    divs = divisors(hK)
    chain = [1]
    cur = rng.choice(divs)
    if cur > 1:
        chain.append(cur)
    while cur != hK:
        nxt = rng.choice([d for d in divs if d % cur == 0 and d > cur])
        chain.append(nxt)
        cur = nxt
    return FiltrationLedger(hK, tuple(chain))


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    capitulation_layer: int | None = None
    kernel_description: str | None = None


def stability_criterion(hK: int, hK1: int, exponent_e: int, N: int) -> StabilityVerdict:
    """Stability test: #H_{K_1} = #H_K forces #H_{K_n} = #H_K for all n.

    When stable and the tower is deep enough (N >= e, p**e the exponent
    of H_K) the whole p-class group capitulates at layer e.
    """
    if hK1 % hK:
        raise ValueError("Chevalley divisibility violated: hK must divide hK1")
    if hK1 != hK:
        return StabilityVerdict(stable=False)
    if N >= exponent_e:
        return StabilityVerdict(
            stable=True,
            capitulation_layer=exponent_e,
            kernel_description="Ker(J_{K_n/K}) = H_K[p^n] for n <= e",
        )
    return StabilityVerdict(stable=True)


def growth_lower_bound(Hn: FinAbGroup, p: int, gap: int) -> int:
    """#H_m >= #H_n * #H_n[p**gap] under injective transfers."""
    return Hn.order * torsion_subgroup(Hn, p**gap).order


def growth_rank_lower_bound(HK: FinAbGroup, p: int, n: int) -> int:
    """Base-field variant: #H_{K_n} >= #H_K * p**(n * rank_p(H_K))."""
    rank = sum(1 for d in HK.divisors if d % p == 0)
    return HK.order * p ** (n * rank)


def transfer_injectivity_check(Hn: FinAbGroup, Hm: FinAbGroup, p: int, gap: int):
    """Checker for ingested towers; failure certifies a non-injective transfer."""
    bound = growth_lower_bound(Hn, p, gap)
    holds = Hm.order >= bound
    if holds:
        msg = f"growth bound holds: #H_m = {Hm.order} >= {bound}"
    else:
        msg = (
            f"#H_m = {Hm.order} < {bound}: some transfer between the layers "
            "is non-injective (capitulation occurs)"
        )
    return holds, msg


@dataclass(frozen=True)
class MainConjectureLedger:
    hK_phi: int
    J_image_order: int
    implied_unit_norm_index: int
    cyclotomic_index_lower_bound: int
    equality_for_all_phi: bool


def main_conjecture_ledger(
    hK_phi: int, J_image_order: int, complete_capitulation: bool
) -> MainConjectureLedger:
    """Index bookkeeping of the fundamental relation
    (E:F) = (N(E_L):F) * #H / #J(H): the unit-norm index #H/#J is a
    certified lower bound for (E:F), an equality for all phi under
    complete capitulation."""
    if hK_phi % J_image_order:
        raise ArithmeticError("J-image order must divide the phi-component order")
    idx = hK_phi // J_image_order
    return MainConjectureLedger(
        hK_phi=hK_phi,
        J_image_order=J_image_order,
        implied_unit_norm_index=idx,
        cyclotomic_index_lower_bound=hK_phi if complete_capitulation else idx,
        equality_for_all_phi=bool(complete_capitulation),
    )
