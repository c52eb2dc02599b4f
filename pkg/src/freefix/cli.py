"""Command-line interface.

Exit status: 0 definitive answer, 1 usage or input error, 2 evidence only
(inconclusive), 3 a budget cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from .budget import Budget
from .closure import EVIDENCE, acl_membership, auto_fixed_verdict, endo_fixed_verdict
from .errors import BudgetExceededError, FreeFixError, WordParseError
from .extensions import algebraic_extensions, fringe, is_free_factor
from .fixpoints import find_retraction, fix_approx, reduce_family, stable_image
from .stallings import SubgroupGraph, build_subgroup, contains, full, intersect
from .whitehead import stabilizer_generators
from .words import Alphabet, Morphism, Word

OK, INPUT_ERROR, INCONCLUSIVE, BUDGET = 0, 1, 2, 3

COMMANDS = ("fold", "member", "basis", "intersect", "fringe", "ae", "freefactor", "stab",
            "fix", "stable-image", "retract", "acl-member", "auto-fixed", "endo-fixed",
            "reduce-family")


class UsageError(FreeFixError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# input parsing ---------------------------------------------------------------

def _symbols(text: str) -> int:
    letters = [c.lower() for c in re.findall(r"[A-Za-z]", text)]
    return max((ord(c) - ord("a") + 1 for c in letters), default=1)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _word_list(alphabet: Alphabet, text: str, where: str, by_line: bool) -> list[Word]:
    out = []
    if by_line:
        items = [(f"{where} line {i}", line.split("#", 1)[0].strip())
                 for i, line in enumerate(text.splitlines(), 1)]
    else:
        items = [(f"{where} item {i}", s.strip()) for i, s in enumerate(text.split(","), 1)]
    for loc, s in items:
        if not s:
            continue
        try:
            out.append(alphabet.parse(s))
        except (WordParseError, ValueError) as e:
            raise WordParseError(f"{loc}: {e}") from None
    return out


def _morphism_blocks(alphabet: Alphabet, text: str, where: str) -> list[Morphism]:
    """Morphisms separated by blank lines or ``---``; errors name the file line."""
    blocks, current, start = [], [], None
    lines = text.splitlines()
    for i, line in enumerate(lines + [""], 1):
        if line.strip() in ("", "---"):
            if current:
                blocks.append((start, "\n".join(current)))
            current, start = [], None
            continue
        if start is None:
            start = i
        current.append(line)
    out = []
    for start, body in blocks:
        try:
            out.append(Morphism.parse(alphabet, body))
        except (WordParseError, ValueError) as e:
            line = getattr(e, "line", None)
            msg = str(e)
            if line is not None:
                msg = re.sub(r"^line \d+: ", "", msg)
                raise WordParseError(f"{where} line {start + line - 1}: {msg}") from None
            raise WordParseError(f"{where} morphism at line {start}: {msg}") from None
    return out


class Inputs:
    def __init__(self, args):
        self.args = args
        texts = [t for t in (args.gens, args.gens2, args.word, args.morphism) if t]
        file_texts = {}
        for key in ("gens_file", "gens2_file", "morphism_file"):
            path = getattr(args, key)
            if path:
                file_texts[key] = _read(path)
        if args.rank is not None:
            if args.rank < 1:
                raise UsageError("--rank must be positive")
            if args.rank > 26:
                raise UsageError("text formats support rank at most 26")
            rank = args.rank
        else:
            sample = " ".join(texts + [re.sub(r"#.*", "", t) for t in file_texts.values()])
            rank = _symbols(sample)
        self.alphabet = Alphabet(rank)
        self.file_texts = file_texts

    def subgroup(self, second=False) -> SubgroupGraph:
        a = self.alphabet
        inline = self.args.gens2 if second else self.args.gens
        key = "gens2_file" if second else "gens_file"
        flag = "--gens2" if second else "--gens"
        words = []
        if inline is not None:
            words += _word_list(a, inline, flag, by_line=False)
        if key in self.file_texts:
            words += _word_list(a, self.file_texts[key], getattr(self.args, key), by_line=True)
        if inline is None and key not in self.file_texts:
            if second:
                return full(a)
            raise UsageError(f"this command needs {flag} or {flag}-file")
        return build_subgroup(words, a)

    def word(self) -> Word:
        if self.args.word is None:
            raise UsageError("this command needs --word")
        try:
            return self.alphabet.parse(self.args.word)
        except (WordParseError, ValueError) as e:
            raise WordParseError(f"--word: {e}") from None

    def morphisms(self) -> list[Morphism]:
        out = []
        if self.args.morphism:
            try:
                out.append(Morphism.parse(self.alphabet, self.args.morphism))
            except (WordParseError, ValueError) as e:
                raise WordParseError(f"--morphism: {e}") from None
        if "morphism_file" in self.file_texts:
            out += _morphism_blocks(self.alphabet, self.file_texts["morphism_file"],
                                    self.args.morphism_file)
        if not out:
            raise UsageError("this command needs --morphism or --morphism-file")
        return out


# output ----------------------------------------------------------------------

def _basis_text(H: SubgroupGraph) -> str:
    return ", ".join(str(w) for w in H.basis) or "1"


def _subgroup_dict(H: SubgroupGraph) -> dict:
    return {"basis": [str(w) for w in H.basis], "rank": H.rank,
            "vertices": H.num_vertices, "edges": H.num_edges}


def _graph_text(H: SubgroupGraph) -> str:
    a = H.alphabet
    lines = [f"vertices: {H.num_vertices} (base 0)", f"rank: {H.rank}", "edges:"]
    lines += [f"  {u} -{a.symbol(x)}-> {v}" for u, x, v in H.edges()]
    lines.append("basis:")
    lines += [f"  {w}" for w in H.basis]
    return "\n".join(lines)


class Out:
    def __init__(self, fmt: str):
        self.fmt = fmt

    def emit(self, text: str, data, graphs=()):
        if self.fmt == "structured":
            print(json.dumps(data, indent=2))
        elif self.fmt == "dot" and graphs:
            print("\n".join(G.to_dot(f"G{i}") for i, G in enumerate(graphs)))
        else:
            print(text)


def _morphisms_text(ms) -> str:
    return "\n---\n".join(m.to_text() for m in ms)


# commands --------------------------------------------------------------------

def _cmd(args, budget: Budget) -> int:
    inp = Inputs(args)
    out = Out(args.format)
    c = args.command
    if c == "fold":
        H = inp.subgroup()
        out.emit(_graph_text(H), _subgroup_dict(H), [H])
        return OK
    if c == "basis":
        H = inp.subgroup()
        out.emit("\n".join(str(w) for w in H.basis) or "1", _subgroup_dict(H), [H])
        return OK
    if c == "member":
        H, w = inp.subgroup(), inp.word()
        r = contains(H, w)
        out.emit(str(r).lower(), {"member": r, "word": str(w)})
        return OK
    if c == "intersect":
        K = intersect(inp.subgroup(), inp.subgroup(second=True))
        out.emit(_basis_text(K), _subgroup_dict(K), [K])
        return OK
    if c in ("fringe", "ae"):
        H = inp.subgroup()
        es = fringe(H, budget) if c == "fringe" else algebraic_extensions(H, budget)
        out.emit("\n".join(_basis_text(K) for K in es),
                 {"kind": es.kind, "members": [_subgroup_dict(K) for K in es]}, es.members)
        return OK
    if c == "freefactor":
        H, K = inp.subgroup(), inp.subgroup(second=True)
        r = is_free_factor(H, K, budget)
        out.emit(str(r).lower(), {"free_factor": r})
        return OK
    if c == "stab":
        H = inp.subgroup()
        gens = stabilizer_generators(H.basis, budget, alphabet=H.alphabet)
        out.emit(_morphisms_text(gens) if gens else "(no generators: trivial stabilizer)",
                 {"generators": [m.to_text() for m in gens]})
        return OK
    if c == "fix":
        ms = inp.morphisms()
        L = args.max_len if args.max_len is not None else budget.max_len
        fa = fix_approx(ms, L, budget)
        text = f"{_basis_text(fa.subgroup)}\nexact: {str(fa.exact).lower()}"
        out.emit(text, {**_subgroup_dict(fa.subgroup), "exact": fa.exact, "length_bound": L},
                 [fa.subgroup])
        return OK if fa.exact else INCONCLUSIVE
    if c == "stable-image":
        ms = inp.morphisms()
        r = stable_image(ms[0], budget.max_iter)
        text = (f"{_basis_text(r.subgroup)}\niterations: {r.iterations}\n"
                f"stabilized: {str(r.stabilized).lower()}")
        out.emit(text, {**_subgroup_dict(r.subgroup), "iterations": r.iterations,
                        "stabilized": r.stabilized}, [r.subgroup])
        return OK if r.stabilized else INCONCLUSIVE
    if c == "retract":
        H = inp.subgroup()
        r = find_retraction(H, budget.retraction_bound, budget)
        if r:
            out.emit(r.to_text(), {"retraction": r.to_text()})
            return OK
        how = "searched exhaustively" if r.complete else f"stopped after {r.nodes} nodes"
        out.emit(f"not found within bound {r.bound} ({how})",
                 {"retraction": None, "bound": r.bound, "complete": r.complete})
        return INCONCLUSIVE
    if c == "acl-member":
        H, w = inp.subgroup(), inp.word()
        r = acl_membership(H, w, budget)
        out.emit(str(r).lower(), {"member": r, "word": str(w)})
        return OK
    if c in ("auto-fixed", "endo-fixed"):
        H = inp.subgroup()
        v = auto_fixed_verdict(H, budget) if c == "auto-fixed" else endo_fixed_verdict(H, budget)
        bound = [v.closure_bound] if v.closure_bound is not None else []
        out.emit(v.report(), v.to_dict(), bound)
        return INCONCLUSIVE if v.answer == EVIDENCE else OK
    if c == "reduce-family":
        ms = inp.morphisms()
        L = args.max_len if args.max_len is not None else budget.max_len
        fam = reduce_family(ms, L, budget)
        text = _morphisms_text(fam)
        if fam.warning:
            text += f"\nwarning: more than {2 * inp.alphabet.size} morphisms needed at bound {L}"
        out.emit(text, {"morphisms": [m.to_text() for m in fam], "warning": fam.warning})
        return INCONCLUSIVE if fam.warning else OK
    raise UsageError(f"unknown command {c!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="freefix", description="Fixed subgroups of free groups.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--rank", type=int, help="rank of the ambient free group")
    p.add_argument("--gens", help="comma-separated generators, e.g. 'a,baccbCCBA'")
    p.add_argument("--gens-file", help="file with one generator per line")
    p.add_argument("--gens2", help="second subgroup (intersect; containing group for freefactor)")
    p.add_argument("--gens2-file")
    p.add_argument("--word", help="a word, e.g. 'abA'")
    p.add_argument("--morphism", help="inline morphism, e.g. 'a->a; b->ab'")
    p.add_argument("--morphism-file",
                   help="morphisms as 'a -> ab' lines, separated by blank lines or ---")
    p.add_argument("--max-len", type=int, help="word-length bound for bounded searches")
    p.add_argument("--fringe-cap", type=int, help="max core-graph vertices for the fringe")
    p.add_argument("--retraction-bound", type=int, help="max letter-image length for retractions")
    p.add_argument("--max-iter", type=int, help="stable-image iterations")
    p.add_argument("--format", choices=("text", "structured", "dot"), default="text")
    return p


def _budget(args) -> Budget:
    changes = {}
    if args.max_len is not None:
        changes["max_len"] = args.max_len
    if args.fringe_cap is not None:
        changes["fringe_cap"] = args.fringe_cap
    if args.retraction_bound is not None:
        changes["retraction_bound"] = args.retraction_bound
    if args.max_iter is not None:
        changes["max_iter"] = args.max_iter
    try:
        return Budget(**changes)
    except ValueError as e:
        raise UsageError(str(e)) from None


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _cmd(args, _budget(args))
    except BudgetExceededError as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return BUDGET
    except (FreeFixError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
