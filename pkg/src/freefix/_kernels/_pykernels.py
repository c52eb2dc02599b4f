"""Pure-Python word kernels.

Words are tuples of nonzero ints: ``i`` is the i-th letter, ``-i`` its
inverse. Morphism images are tuples indexed by ``letter - 1``.
"""


def reduce_word(letters):
    out = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def apply_images(images, word):
    out = []
    for x in word:
        if x > 0:
            seq = images[x - 1]
        else:
            seq = [-y for y in reversed(images[-x - 1])]
        for y in seq:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def trace(table, n, word, start=0):
    """End vertex of reading ``word`` from ``start``, or -1."""
    v = start
    for x in word:
        v = table[v][x - 1 if x > 0 else n - x - 1]
        if v < 0:
            return -1
    return v


def fixed_words(morphisms, n, max_len, table=None):
    """All reduced words of length <= max_len fixed by every morphism.

    Words that are members of the subgroup given by ``table`` (a Stallings
    transition table, base 0) are skipped. Output is in DFS order.
    """
    letters = list(range(1, n + 1)) + [-i for i in range(1, n + 1)]
    imgs = []
    caps = []
    for images in morphisms:
        full = {}
        for i in range(1, n + 1):
            full[i] = tuple(images[i - 1])
            full[-i] = tuple(-y for y in reversed(images[i - 1]))
        imgs.append(full)
        caps.append(max((len(t) for t in images), default=0))

    found = []
    if table is None or trace(table, n, ()) != 0:
        found.append(())

    word = []
    # stack of per-morphism image lists for the current prefix
    stack = [[()] * len(imgs)]

    def ok(depth, images_now):
        fixed = True
        for k, img in enumerate(images_now):
            bound = len(img) - caps[k] * (max_len - depth)
            if bound > max_len:
                return False, False
            if bound > 0:
                m = min(bound, depth)
                if tuple(img[:m]) != tuple(word[:m]):
                    return False, False
            if fixed and (len(img) != depth or tuple(img) != tuple(word)):
                fixed = False
        return True, fixed

    def extend(img, x, full):
        out = list(img)
        for y in full[x]:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
        return tuple(out)

    def dfs(depth):
        if depth == max_len:
            return
        prev = word[-1] if word else 0
        for x in letters:
            if x == -prev:
                continue
            word.append(x)
            current = [extend(stack[-1][k], x, imgs[k]) for k in range(len(imgs))]
            alive, fixed = ok(depth + 1, current)
            if alive:
                if fixed and (table is None or trace(table, n, word) != 0):
                    found.append(tuple(word))
                stack.append(current)
                dfs(depth + 1)
                stack.pop()
            word.pop()

    dfs(0)
    return found
