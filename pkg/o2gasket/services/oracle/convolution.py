"""
Exact rational convolution powers of a sub-probability sequence
"""

import logging
from fractions import Fraction
from typing import List, Sequence

from o2gasket.core.exceptions import PreconditionError

logger = logging.getLogger(__name__)


def exact_convolution_powers(mu: Sequence[Fraction], depth: int, ell_max: int) -> List[List[Fraction]]:
    """table[p][l] = mu^{*p}(l) for p = 0..depth and l = 0..ell_max; table[0] is the Dirac mass at 0"""
    if depth < 0 or ell_max < 0:
        raise PreconditionError(f"depth and ell_max must be >= 0, got {depth}, {ell_max}")
    mu = [Fraction(x) for x in mu[:ell_max + 1]]
    mu += [Fraction(0)] * (ell_max + 1 - len(mu))
    if any(x < 0 for x in mu) or sum(mu, Fraction(0)) > 1:
        raise PreconditionError("mu must be a sub-probability sequence")
    support = [i for i, x in enumerate(mu) if x]
    table = [[Fraction(1)] + [Fraction(0)] * ell_max]
    for p in range(1, depth + 1):
        previous = table[-1]
        current = [Fraction(0)] * (ell_max + 1)
        for i, weight in enumerate(previous):
            if not weight:
                continue
            for j in support:
                if i + j > ell_max:
                    break
                current[i + j] += weight * mu[j]
        table.append(current)
    logger.debug(f"exact convolution powers up to p={depth}, l={ell_max}")
    return table
