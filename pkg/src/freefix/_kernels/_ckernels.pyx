# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled word kernels; same contracts as ``_pykernels``."""

from libc.stdlib cimport malloc, free


cdef inline int _idx(int x, int n) nogil:
    return x - 1 if x > 0 else n - x - 1


def reduce_word(letters):
    cdef Py_ssize_t m = len(letters)
    cdef int *buf = <int *> malloc((m + 1) * sizeof(int))
    cdef Py_ssize_t top = 0
    cdef int x
    if buf == NULL:
        raise MemoryError()
    try:
        for obj in letters:
            x = obj
            if top > 0 and buf[top - 1] == -x:
                top -= 1
            else:
                buf[top] = x
                top += 1
        return tuple([buf[i] for i in range(top)])
    finally:
        free(buf)


def apply_images(images, word):
    cdef Py_ssize_t total = 0
    cdef int x, y
    cdef Py_ssize_t top = 0, j, ln
    for obj in word:
        x = obj
        total += len(images[x - 1] if x > 0 else images[-x - 1])
    cdef int *buf = <int *> malloc((total + 1) * sizeof(int))
    if buf == NULL:
        raise MemoryError()
    try:
        for obj in word:
            x = obj
            if x > 0:
                for yobj in images[x - 1]:
                    y = yobj
                    if top > 0 and buf[top - 1] == -y:
                        top -= 1
                    else:
                        buf[top] = y
                        top += 1
            else:
                seq = images[-x - 1]
                ln = len(seq)
                for j in range(ln - 1, -1, -1):
                    y = -<int> seq[j]
                    if top > 0 and buf[top - 1] == -y:
                        top -= 1
                    else:
                        buf[top] = y
                        top += 1
        return tuple([buf[i] for i in range(top)])
    finally:
        free(buf)


def trace(table, int n, word, int start=0):
    cdef int v = start
    cdef int x
    for obj in word:
        x = obj
        v = table[v][_idx(x, n)]
        if v < 0:
            return -1
    return v


cdef int _trace_c(int *tab, int n, int *w, int length) nogil:
    cdef int v = 0
    cdef int i
    for i in range(length):
        v = tab[v * 2 * n + _idx(w[i], n)]
        if v < 0:
            return -1
    return v


def fixed_words(morphisms, int n, int max_len, table=None):
    cdef int nm = len(morphisms)
    cdef int n2 = 2 * n
    cdef int L = max_len
    cdef int k, li, i, j, x, y, depth, top, cap, bound, m, alive, fixed, nv
    cdef Py_ssize_t ln
    cdef Py_ssize_t total_img = 0, off

    cdef int *img_off = <int *> malloc((nm * n2 + 1) * sizeof(int))
    cdef int *img_len = <int *> malloc((nm * n2 + 1) * sizeof(int))
    cdef int *caps = <int *> malloc((nm + 1) * sizeof(int))
    cdef int *strides = <int *> malloc((nm + 1) * sizeof(int))
    cdef Py_ssize_t *buf_off = <Py_ssize_t *> malloc((nm + 1) * sizeof(Py_ssize_t))
    cdef int *lens = <int *> malloc((nm * (L + 1) + 1) * sizeof(int))
    cdef int *w = <int *> malloc((L + 1) * sizeof(int))
    cdef int *ch = <int *> malloc((L + 2) * sizeof(int))
    cdef int *img_data = NULL
    cdef int *bufs = NULL
    cdef int *tab = NULL
    cdef int *src
    cdef int *dst
    cdef int *im

    found = []
    try:
        if (img_off == NULL or img_len == NULL or caps == NULL or strides == NULL
                or buf_off == NULL or lens == NULL or w == NULL or ch == NULL):
            raise MemoryError()
        for k in range(nm):
            cap = 0
            for i in range(n):
                ln = len(morphisms[k][i])
                total_img += 2 * ln
                if ln > cap:
                    cap = ln
            caps[k] = cap
        img_data = <int *> malloc((total_img + 1) * sizeof(int))
        if img_data == NULL:
            raise MemoryError()
        off = 0
        for k in range(nm):
            for i in range(n):
                seq = morphisms[k][i]
                ln = len(seq)
                img_off[k * n2 + i] = off
                img_len[k * n2 + i] = ln
                for j in range(ln):
                    img_data[off + j] = seq[j]
                off += ln
                img_off[k * n2 + n + i] = off
                img_len[k * n2 + n + i] = ln
                for j in range(ln):
                    img_data[off + j] = -<int> seq[ln - 1 - j]
                off += ln
        off = 0
        for k in range(nm):
            strides[k] = caps[k] * L + 1
            buf_off[k] = off
            off += strides[k] * (L + 1)
            lens[k * (L + 1)] = 0
        bufs = <int *> malloc((off + 1) * sizeof(int))
        if bufs == NULL:
            raise MemoryError()

        if table is not None:
            nv = len(table)
            tab = <int *> malloc((nv * n2 + 1) * sizeof(int))
            if tab == NULL:
                raise MemoryError()
            for i in range(nv):
                row = table[i]
                for j in range(n2):
                    tab[i * n2 + j] = row[j]

        if tab == NULL or _trace_c(tab, n, w, 0) != 0:
            found.append(())

        depth = 0
        ch[0] = 0
        while depth >= 0:
            if depth == L or ch[depth] == n2:
                depth -= 1
                if depth >= 0:
                    ch[depth] += 1
                continue
            li = ch[depth]
            x = li + 1 if li < n else -(li - n + 1)
            if depth > 0 and x == -w[depth - 1]:
                ch[depth] += 1
                continue
            w[depth] = x
            alive = 1
            fixed = 1
            for k in range(nm):
                src = bufs + buf_off[k] + depth * strides[k]
                dst = src + strides[k]
                top = lens[k * (L + 1) + depth]
                for j in range(top):
                    dst[j] = src[j]
                im = img_data + img_off[k * n2 + li]
                for j in range(img_len[k * n2 + li]):
                    y = im[j]
                    if top > 0 and dst[top - 1] == -y:
                        top -= 1
                    else:
                        dst[top] = y
                        top += 1
                lens[k * (L + 1) + depth + 1] = top
                bound = top - caps[k] * (L - depth - 1)
                if bound > L:
                    alive = 0
                    break
                if bound > 0:
                    m = bound if bound < depth + 1 else depth + 1
                    for j in range(m):
                        if dst[j] != w[j]:
                            alive = 0
                            break
                    if not alive:
                        break
                if fixed:
                    if top != depth + 1:
                        fixed = 0
                    else:
                        for j in range(top):
                            if dst[j] != w[j]:
                                fixed = 0
                                break
            if alive:
                if fixed and (tab == NULL or _trace_c(tab, n, w, depth + 1) != 0):
                    found.append(tuple([w[j] for j in range(depth + 1)]))
                depth += 1
                ch[depth] = 0
            else:
                ch[depth] += 1
        return found
    finally:
        free(img_off)
        free(img_len)
        free(caps)
        free(strides)
        free(buf_off)
        free(lens)
        free(w)
        free(ch)
        free(img_data)
        free(bufs)
        free(tab)
