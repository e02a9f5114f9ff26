"""Recovery of decision coefficients from a candidate field."""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, SkipValidation
from scipy import optimize

from mfg_switch.discretization.partition import EpsPartition
from mfg_switch.flow.builder import combine
from mfg_switch.flow.decision_plan import DecisionKey, DecisionPlan
from mfg_switch.flow.eps_paths import EpsPath, enumerate_eps_paths
from mfg_switch.network.topology import Node
from mfg_switch.profiles.mass_field import MassField, field_l2_distance
from mfg_switch.solver.value_table import ValueTable
from mfg_switch.utilities.constants import DEFAULT_MAX_PATHS
from mfg_switch.utilities.errors import MfgSwitchError

logger = logging.getLogger(__name__)

Edge = Tuple[int, Fraction, int, Fraction]

_CONSERVATION_WEIGHT = 10.0
_FREE_MASS = 1e-12


class Refusal(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    node: int
    bits: str
    t: Fraction
    residual: float


class MembershipCertificate(BaseModel):
    """Outcome of testing whether a field lies in the ε-best-response image."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    certified: bool
    plan: SkipValidation[Optional[DecisionPlan]] = None
    paths: SkipValidation[List[EpsPath]] = []
    l2_residual: float = float("inf")
    sup_residual: float = float("inf")
    refusal: Optional[Refusal] = None
    message: str = ""


def certify_membership(
    candidate: MassField,
    table: ValueTable,
    part: EpsPartition,
    initial: MassField,
    tol: float,
    max_paths: int = DEFAULT_MAX_PATHS,
) -> MembershipCertificate:
    """Look for a decision plan over ε-optimal paths that reproduces ``candidate``.

    The unknowns are the masses carried by every ε-optimal switch. They are
    fitted by non-negative least squares to the mass balance at decision
    nodes and to the candidate's values at every piece start and at T, turned
    into coefficients by dividing by the mass reaching each decision node,
    then recombined and compared with the candidate in L² and sup norm.
    """
    try:
        paths = enumerate_eps_paths(table, part, initial, max_paths)
    except MfgSwitchError as e:
        return MembershipCertificate(certified=False, message=str(e))

    size, horizon = candidate.size, candidate.horizon
    initial_masses = initial.initial_masses()
    targets = DecisionPlan.decision_targets(paths)
    edges: List[Edge] = [
        (node, t, succ, tau) for (node, t), found in targets.items() for succ, tau in found
    ]
    position = {edge: k for k, edge in enumerate(edges)}
    samples = sorted(set(part.nodes[:-1]) | set(candidate.breakpoints()[:-1]))

    rows: List[np.ndarray] = []
    rhs: List[float] = []
    for (node, t) in targets:
        row = np.zeros(len(edges))
        for edge, k in position.items():
            if edge[:2] == (node, t):
                row[k] += 1.0
            if (edge[2], edge[3]) == (node, t):
                row[k] -= 1.0
        start = float(initial_masses.get(node, 0)) if t == 0 else 0.0
        rows.append(_CONSERVATION_WEIGHT * row)
        rhs.append(_CONSERVATION_WEIGHT * start)

    for index in range(2**size):
        profile = candidate.profile(index)
        base = float(initial_masses.get(index, 0))
        for u in samples + [horizon]:
            row = np.zeros(len(edges))
            for (node, t, succ, tau), k in position.items():
                if succ == index and tau <= u:
                    row[k] += 1.0
                if node == index and tau <= u:
                    row[k] -= 1.0
            rows.append(row)
            rhs.append(float(profile.value_at(u)) - base)

    if edges:
        flows, _ = optimize.nnls(np.array(rows), np.array(rhs))
    else:
        flows = np.zeros(0)

    coefficients: Dict[DecisionKey, Dict] = {}
    free = set()
    total = float(initial.total_mass)
    for key, found in targets.items():
        outflow = sum(flows[position[key + target]] for target in found)
        if outflow <= _FREE_MASS * max(total, 1.0):
            free.add(key)
            coefficients[key] = {target: 1.0 / len(found) for target in found}
        else:
            coefficients[key] = {
                target: float(flows[position[key + target]] / outflow) for target in found
            }
    plan = DecisionPlan(size, coefficients, frozenset(free))
    rebuilt = combine(plan, paths, initial)

    l2 = field_l2_distance(candidate, rebuilt)
    refusal = None
    sup = 0.0
    for u in sorted(set(samples) | set(rebuilt.breakpoints()[:-1])) + [horizon]:
        for index in range(2**size):
            gap = abs(
                float(candidate.profile(index).value_at(u))
                - float(rebuilt.profile(index).value_at(u))
            )
            sup = max(sup, gap)
            if gap > tol and refusal is None:
                refusal = Refusal(
                    node=index, bits=Node(index, size).label, t=u, residual=gap
                )
    certified = l2 <= tol and sup <= tol
    if certified:
        message = "Field is reproduced by ε-optimal decisions"
    elif refusal is not None:
        message = (
            f"Inconsistent at node {refusal.bits} and t={refusal.t}: "
            f"residual {refusal.residual:.3e}"
        )
    else:
        message = f"L2 residual {l2:.3e} exceeds tolerance {tol:.1e}"
    if not certified:
        logger.info("Certificate refused: %s", message)
    return MembershipCertificate(
        certified=certified,
        plan=plan,
        paths=paths,
        l2_residual=l2,
        sup_residual=sup,
        refusal=refusal,
        message=message,
    )
