"""Pure-Python hot loops; reference semantics for the compiled ``_kernels``.

Frame elements are packed integers: bit ``g`` is one atom of one context.
``up_images[g]`` holds the bits of every atom that atom ``g`` refines into in
each context above its own (itself included).
"""

from __future__ import annotations


class CapExceeded(RuntimeError):
    """Enumeration would exceed the configured cap."""


def implies_bits(up_images, s: int, t: int) -> int:
    bad = s & ~t
    out = 0
    for g, img in enumerate(up_images):
        if not img & bad:
            out |= 1 << g
    return out


def neg_bits(up_images, s: int) -> int:
    out = 0
    for g, img in enumerate(up_images):
        if not img & s:
            out |= 1 << g
    return out


def notnot_bits(up_images, s: int) -> int:
    # smallest P(D)-element above every S(E), E ⊇ D, at each D
    reach = 0
    for h, img in enumerate(up_images):
        if img & s:
            reach |= 1 << h
    out = 0
    for g, img in enumerate(up_images):
        if not img & ~reach:
            out |= 1 << g
    return out


def is_upset(up_images, s: int) -> bool:
    g = 0
    x = s
    while x:
        if x & 1 and up_images[g] & ~s:
            return False
        x >>= 1
        g += 1
    return True


def enumerate_upsets(up_images, cap: int) -> list[int]:
    """All packed elements closed under ``up_images``, sorted ascending."""
    nb = len(up_images)
    rest = [img & ~(1 << g) for g, img in enumerate(up_images)]
    out: list[int] = []
    stack = [(nb - 1, 0)]
    while stack:
        g, s = stack.pop()
        if g < 0:
            out.append(s)
            if len(out) > cap:
                raise CapExceeded(f"frame has more than {cap} elements")
            continue
        stack.append((g - 1, s))
        if not rest[g] & ~s:
            stack.append((g - 1, s | (1 << g)))
    out.sort()
    return out


def prime_elements(elements, top: int) -> list[int]:
    """Indices of P != top with: U & V <= P implies U <= P or V <= P."""
    out = []
    for i, p in enumerate(elements):
        if p == top:
            continue
        outside = [u for u in elements if u & ~p]
        ok = True
        for a in range(len(outside)):
            u = outside[a]
            for b in range(a, len(outside)):
                if not (u & outside[b]) & ~p:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(i)
    return out


def adjunction_violations(elements, implies_table) -> int:
    """Count triples with ``r <= (s -> t)`` disagreeing with ``r & s <= t``."""
    n = len(elements)
    bad = 0
    for si in range(n):
        s = elements[si]
        for ti in range(n):
            t = elements[ti]
            imp = implies_table[si * n + ti]
            for r in elements:
                if (not r & ~imp) != (not (r & s) & ~t):
                    bad += 1
    return bad


def exactly_one_search(n_vars: int, blocks):
    """Backtracking for a 0/1 assignment with exactly one 1 per block.

    Branches on the open block with fewest free variables (lowest index on
    ties), trying its free variables in increasing order.  Returns
    ``(assignment or None, nodes)``; variables in no block default to 0.
    """
    var_blocks = [[] for _ in range(n_vars)]
    for b, blk in enumerate(blocks):
        for v in blk:
            var_blocks[v].append(b)
    val = [-1] * n_vars
    ones = [0] * len(blocks)
    free = [len(blk) for blk in blocks]
    trail: list[int] = []
    nodes = 0

    def assign(v, x):
        queue = [(v, x)]
        while queue:
            v, x = queue.pop()
            if val[v] != -1:
                if val[v] != x:
                    return False
                continue
            val[v] = x
            trail.append(v)
            for b in var_blocks[v]:
                free[b] -= 1
                ones[b] += x
            for b in var_blocks[v]:
                if x == 1:
                    if ones[b] > 1:
                        return False
                    for w in blocks[b]:
                        if val[w] == -1:
                            queue.append((w, 0))
                elif ones[b] == 0:
                    if free[b] == 0:
                        return False
                    if free[b] == 1:
                        for w in blocks[b]:
                            if val[w] == -1:
                                queue.append((w, 1))
                                break
        return True

    def undo(mark):
        while len(trail) > mark:
            v = trail.pop()
            x = val[v]
            val[v] = -1
            for b in var_blocks[v]:
                free[b] += 1
                if x == 1:
                    ones[b] -= 1

    def pick():
        best, best_free = -1, None
        for b in range(len(blocks)):
            if ones[b] == 0 and (best_free is None or free[b] < best_free):
                best, best_free = b, free[b]
        return best

    def rec():
        nonlocal nodes
        b = pick()
        if b == -1:
            return True
        for v in blocks[b]:
            if val[v] != -1:
                continue
            nodes += 1
            mark = len(trail)
            if assign(v, 1) and rec():
                return True
            undo(mark)
        return False

    if rec():
        return [max(x, 0) for x in val], nodes
    return None, nodes
