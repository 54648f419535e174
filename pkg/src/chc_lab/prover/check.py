"""Independent replay of refutation proofs.

Nothing here touches the search code: substitution, renaming and clause
comparison are reimplemented from scratch on purpose.
"""

from __future__ import annotations


def _subst_term(t, sigma):
    if isinstance(t, str):
        return sigma.get(t, t)
    return (t[0],) + tuple(_subst_term(a, sigma) for a in t[1:])


def _subst_lit(lit, sigma):
    return (lit[0], lit[1], _subst_term(lit[2], sigma), _subst_term(lit[3], sigma))


def _prime(t):
    if isinstance(t, str):
        return "Y" + t[1:] if t.startswith("X") else t
    return (t[0],) + tuple(_prime(a) for a in t[1:])


def _vars_of(t, acc):
    if isinstance(t, str):
        acc.add(t)
    else:
        for a in t[1:]:
            _vars_of(a, acc)


def _match_term(a, b, fwd, back):
    if isinstance(a, str) or isinstance(b, str):
        if not (isinstance(a, str) and isinstance(b, str)):
            return False
        if fwd.get(a, b) != b or back.get(b, a) != a:
            return False
        fwd[a] = b
        back[b] = a
        return True
    if a[0] != b[0] or len(a) != len(b):
        return False
    return all(_match_term(x, y, fwd, back) for x, y in zip(a[1:], b[1:]))


def is_variant(c, d) -> bool:
    """Clause sets equal up to a bijective variable renaming."""
    c = list(set(c))
    d = list(set(d))
    if len(c) != len(d):
        return False

    def go(i, used, fwd, back):
        if i == len(c):
            return True
        for k, lit in enumerate(d):
            if k in used or lit[0] != c[i][0] or lit[1] != c[i][1]:
                continue
            f2, b2 = dict(fwd), dict(back)
            if _match_term(c[i][2], lit[2], f2, b2) and _match_term(c[i][3], lit[3], f2, b2):
                if go(i + 1, used | {k}, f2, b2):
                    return True
        return False

    return go(0, frozenset(), {}, {})


def _resolves_to(c1, c2, sigma, conclusion) -> bool:
    c2 = [(l[0], l[1], _prime(l[2]), _prime(l[3])) for l in c2]
    s1 = [_subst_lit(l, sigma) for l in c1]
    s2 = [_subst_lit(l, sigma) for l in c2]
    for p, a in enumerate(s1):
        for q, b in enumerate(s2):
            if a[0] == b[0] or a[1:] != b[1:]:
                continue
            rest = {l for k, l in enumerate(s1) if k != p}
            rest |= {l for k, l in enumerate(s2) if k != q}
            if is_variant(rest, conclusion):
                return True
    return False


def _factors_to(c, sigma, conclusion) -> bool:
    s = [_subst_lit(l, sigma) for l in c]
    merged = False
    for p in range(len(c)):
        for q in range(p + 1, len(c)):
            if c[p][0] and c[q][0] and s[p] == s[q]:
                merged = True
    return merged and is_variant(set(s), conclusion)


def check_proof(proof, inputs) -> bool:
    """True iff ``proof`` is a valid refutation from ``inputs``."""
    steps = list(proof.steps)
    if not steps or steps[-1].clause:
        return False
    for n, step in enumerate(steps, 1):
        parents = step.parents
        if any(not (1 <= p < n) for p in parents):
            return False
        sigma = dict(step.unifier)
        if step.rule == "input":
            if parents or not any(is_variant(step.clause, c) for c in inputs):
                return False
        elif step.rule == "resolve":
            if len(parents) != 2:
                return False
            c1 = steps[parents[0] - 1].clause
            c2 = steps[parents[1] - 1].clause
            if not _resolves_to(c1, c2, sigma, step.clause):
                return False
        elif step.rule == "factor":
            if len(parents) != 1:
                return False
            if not _factors_to(steps[parents[0] - 1].clause, sigma, step.clause):
                return False
        else:
            return False
    return True
