#!/usr/bin/env python3
"""MILP solve driver speaking the HiGHS command-line conventions.

    solve_lp.py MODEL.lp --solution_file OUT [--time_limit S] [--random_seed K]
                [--options_file F] [--read_solution_file WARM]

Reads an LP-format model, solves it with scipy's MILP interface (HiGHS under
the hood), and writes the solution in the HiGHS raw style with a trailing
``# Gap`` comment.  A real ``highs`` binary accepts the same invocation and
produces a compatible file, so it can be dropped in without code changes.

Limitations relative to a full solver binary: starting solutions passed via
--read_solution_file are acknowledged but not used (scipy's interface cannot
inject incumbents), and --random_seed is accepted for interface parity only —
the backend is single-threaded and deterministic regardless.
"""

import argparse
import re
import sys

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp

INF = float("inf")

_TOKEN = re.compile(
    r"""\s*(?:
        (?P<comment>\\[^\n]*)
      | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
      | (?P<word>[A-Za-z_][A-Za-z0-9_.]*)
      | (?P<op><=|>=|=<|=>|<|>|=|\+|-|:)
    )""",
    re.VERBOSE,
)

SECTION_WORDS = {
    "minimize", "minimise", "min", "maximize", "maximise", "max",
    "subject", "such", "st", "s.t.", "bounds", "bound",
    "binaries", "binary", "bin", "general", "generals", "gen", "end",
}


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                snippet = text[pos:pos + 20].strip().splitlines()[0]
                raise ValueError(f"unexpected LP input near {snippet!r}")
            break
        pos = m.end()
        if m.lastgroup == "comment":
            continue
        tokens.append((m.lastgroup, m.group(m.lastgroup)))
    tokens.append(("eof", ""))
    return tokens


class LpModel:
    def __init__(self):
        self.var_names = []
        self.var_index = {}
        self.lower = []
        self.upper = []
        self.binary = []
        self.objective = {}
        self.obj_constant = 0.0
        self.rows = []  # (name, {index: coeff}, relation, rhs)

    def var(self, name):
        if name not in self.var_index:
            self.var_index[name] = len(self.var_names)
            self.var_names.append(name)
            self.lower.append(0.0)
            self.upper.append(INF)
            self.binary.append(False)
        return self.var_index[name]


class LpParser:
    def __init__(self, tokens):
        self.toks = tokens
        self.at = 0
        self.model = LpModel()

    def peek(self):
        return self.toks[self.at]

    def take(self):
        tok = self.toks[self.at]
        self.at += 1
        return tok

    def at_section(self):
        kind, text = self.peek()
        return kind == "word" and text.lower() in SECTION_WORDS

    def parse(self):
        kind, text = self.take()
        head = text.lower()
        if head in ("maximize", "maximise", "max"):
            raise ValueError("only minimization is supported")
        if kind != "word" or head not in ("minimize", "minimise", "min"):
            raise ValueError(f"expected 'Minimize', got {text!r}")
        self.skip_label()
        self.model.objective, self.model.obj_constant = self.expression()
        self.expect_subject_to()
        self.constraints()
        self.trailers()
        return self.model

    def skip_label(self):
        kind, _ = self.peek()
        if kind == "word" and not self.at_section():
            if self.toks[self.at + 1][1] == ":":
                self.at += 2
                return self.toks[self.at - 2][1]
        return None

    def expression(self):
        terms = {}
        constant = 0.0
        sign = 1.0
        pending = False
        while True:
            kind, text = self.peek()
            if kind in ("eof",) or (kind == "op" and text not in ("+", "-")):
                break
            if kind == "word" and text.lower() in SECTION_WORDS and not pending:
                break
            self.take()
            if kind == "op" and text == "+":
                pending = True
            elif kind == "op" and text == "-":
                sign = -sign
                pending = True
            elif kind == "number":
                nk, nt = self.peek()
                if nk == "word" and nt.lower() not in SECTION_WORDS:
                    self.take()
                    idx = self.model.var(nt)
                    terms[idx] = terms.get(idx, 0.0) + sign * float(text)
                else:
                    constant += sign * float(text)
                sign, pending = 1.0, False
            elif kind == "word":
                idx = self.model.var(text)
                terms[idx] = terms.get(idx, 0.0) + sign
                sign, pending = 1.0, False
            else:
                raise ValueError(f"unexpected token {text!r} in expression")
        if pending:
            raise ValueError("expression ends on a dangling sign")
        return terms, constant

    def expect_subject_to(self):
        kind, text = self.take()
        head = text.lower()
        if head in ("subject", "such"):
            _, to = self.take()
            if to.lower() != "to":
                raise ValueError(f"expected 'To' after {text!r}")
        elif head not in ("st", "s.t."):
            raise ValueError(f"expected 'Subject To', got {text!r}")

    def constraints(self):
        while not self.at_section():
            kind, text = self.peek()
            if kind == "eof":
                raise ValueError("LP input ends inside Subject To")
            name = self.skip_label()
            terms, lhs_const = self.expression()
            kind, rel = self.take()
            if kind != "op" or rel not in ("<=", ">=", "<", ">", "=", "=<", "=>"):
                raise ValueError(f"expected a relation, got {rel!r}")
            relation = {"<=": "<", "<": "<", "=<": "<",
                        ">=": ">", ">": ">", "=>": ">",
                        "=": "="}[rel]
            sign = 1.0
            kind, text = self.take()
            while kind == "op" and text in ("+", "-"):
                if text == "-":
                    sign = -sign
                kind, text = self.take()
            if kind != "number":
                raise ValueError(f"expected a number after the relation, got {text!r}")
            rhs = sign * float(text) - lhs_const
            if not terms:
                raise ValueError("constraint has no variables")
            if not name:
                name = f"c{len(self.model.rows) + 1}"
            self.model.rows.append((name, terms, relation, rhs))

    def trailers(self):
        while True:
            kind, text = self.take()
            if kind == "eof":
                raise ValueError("missing 'End'")
            head = text.lower()
            if head == "end":
                return
            if head in ("bounds", "bound"):
                self.bounds_section()
            elif head in ("binaries", "binary", "bin"):
                self.binaries_section()
            elif head in ("general", "generals", "gen"):
                raise ValueError("general integer variables are not supported")
            else:
                raise ValueError(f"unexpected section {text!r}")

    def bound_number(self):
        sign = 1.0
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            if self.take()[1] == "-":
                sign = -sign
        kind, text = self.peek()
        if kind == "number":
            self.take()
            return sign * float(text)
        if kind == "word" and text.lower() in ("inf", "infinity"):
            self.take()
            return sign * INF
        return None

    def bounds_section(self):
        m = self.model
        while not self.at_section():
            if self.peek()[0] == "eof":
                raise ValueError("LP input ends inside Bounds")
            first = self.bound_number()
            if first is not None:
                kind, rel = self.take()
                if rel not in ("<=", "<", "=<"):
                    raise ValueError(f"expected '<=' after a bound value, got {rel!r}")
                kind, name = self.take()
                if kind != "word":
                    raise ValueError("expected a variable name in Bounds")
                idx = m.var(name)
                m.lower[idx] = first
                if self.peek()[0] == "op" and self.peek()[1] in ("<=", "<", "=<"):
                    self.take()
                    up = self.bound_number()
                    if up is None:
                        raise ValueError("expected an upper bound")
                    m.upper[idx] = up
                continue
            kind, name = self.take()
            if kind != "word":
                raise ValueError("expected a variable name in Bounds")
            idx = m.var(name)
            if self.peek()[0] == "word" and self.peek()[1].lower() == "free":
                self.take()
                m.lower[idx], m.upper[idx] = -INF, INF
                continue
            kind, rel = self.take()
            if kind != "op":
                raise ValueError("expected a relation in Bounds")
            value = self.bound_number()
            if value is None:
                raise ValueError("expected a bound value")
            if rel in ("<=", "<", "=<"):
                m.upper[idx] = value
            elif rel in (">=", ">", "=>"):
                m.lower[idx] = value
            else:
                m.lower[idx] = m.upper[idx] = value

    def binaries_section(self):
        while not self.at_section():
            kind, name = self.take()
            if kind == "eof":
                raise ValueError("LP input ends inside Binaries")
            if kind != "word":
                raise ValueError("expected a variable name in Binaries")
            idx = self.model.var(name)
            self.model.binary[idx] = True
            self.model.lower[idx], self.model.upper[idx] = 0.0, 1.0


def read_options_file(path):
    options = {}
    try:
        with open(path) as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line or "=" not in line:
                    continue
                key, value = (part.strip() for part in line.split("=", 1))
                options[key] = value
    except OSError as exc:
        print(f"warning: cannot read options file {path}: {exc}", file=sys.stderr)
    return options


def fmt(v):
    return format(float(v), ".17g")


def write_solution(path, model, status_line, x, objective, gap):
    lines = ["Model status", status_line, "", "# Primal solution values"]
    if x is None:
        lines.append("None")
    else:
        lines.append("Feasible")
        lines.append(f"Objective {fmt(objective)}")
        lines.append(f"# Columns {len(model.var_names)}")
        lines.extend(f"{name} {fmt(val)}" for name, val in zip(model.var_names, x))
        lines.append(f"# Rows {len(model.rows)}")
        for name, terms, _rel, _rhs in model.rows:
            activity = sum(coeff * x[idx] for idx, coeff in terms.items())
            lines.append(f"{name} {fmt(activity)}")
    lines += ["", "# Dual solution values", "None", "", "# Basis", "HiGHS v1", "None"]
    if gap is not None:
        lines.append(f"# Gap {fmt(gap)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def main(argv):
    ap = argparse.ArgumentParser(description=__doc__, add_help=False)
    ap.add_argument("model")
    ap.add_argument("--solution_file", required=True)
    ap.add_argument("--time_limit", type=float, default=None)
    ap.add_argument("--random_seed", type=int, default=None)
    ap.add_argument("--options_file", default=None)
    ap.add_argument("--read_solution_file", default=None)
    ap.add_argument("--presolve", default=None)
    ap.add_argument("--parallel", default=None)
    args, extra = ap.parse_known_args(argv)
    if extra:
        print(f"ignoring unrecognized arguments: {extra}", file=sys.stderr)

    with open(args.model) as fh:
        text = fh.read()
    model = LpParser(tokenize(text)).parse()
    n = len(model.var_names)
    print(f"parsed {args.model}: {n} variables, {len(model.rows)} rows", file=sys.stderr)

    if args.read_solution_file:
        print(f"starting solution {args.read_solution_file} acknowledged but not used "
              "(this backend cannot inject incumbents)", file=sys.stderr)
    if args.random_seed is not None:
        print(f"random seed {args.random_seed} accepted (backend is deterministic)", file=sys.stderr)

    options = {}
    if args.options_file:
        options = read_options_file(args.options_file)

    c = np.zeros(n)
    for idx, coeff in model.objective.items():
        c[idx] = coeff

    constraints = []
    if model.rows:
        data, row_ids, col_ids, lo, hi = [], [], [], [], []
        for r, (_name, terms, relation, rhs) in enumerate(model.rows):
            for idx, coeff in terms.items():
                row_ids.append(r)
                col_ids.append(idx)
                data.append(coeff)
            if relation == "<":
                lo.append(-INF)
                hi.append(rhs)
            elif relation == ">":
                lo.append(rhs)
                hi.append(INF)
            else:
                lo.append(rhs)
                hi.append(rhs)
        a = sparse.csc_matrix((data, (row_ids, col_ids)), shape=(len(model.rows), n))
        constraints.append(LinearConstraint(a, np.array(lo), np.array(hi)))

    milp_options = {}
    if args.time_limit is not None:
        milp_options["time_limit"] = args.time_limit
    if "mip_rel_gap" in options:
        milp_options["mip_rel_gap"] = float(options["mip_rel_gap"])

    res = milp(
        c=c,
        constraints=constraints,
        integrality=np.array([1 if b else 0 for b in model.binary]),
        bounds=Bounds(np.array(model.lower), np.array(model.upper)),
        options=milp_options,
    )

    if res.status == 0:
        status_line = "Optimal"
    elif res.status == 1:
        status_line = "Time limit reached"
    elif res.status == 2:
        status_line = "Infeasible"
    elif res.status == 3:
        status_line = "Unbounded"
    else:
        status_line = "Solve error"

    x = res.x if res.x is not None else None
    objective = (res.fun + model.obj_constant) if x is not None else None
    gap = getattr(res, "mip_gap", None)
    if gap is None and res.status == 0:
        gap = 0.0

    write_solution(args.solution_file, model, status_line, x, objective, gap)
    print(f"status: {status_line}" + (f", objective {fmt(objective)}" if x is not None else ""),
          file=sys.stderr)
    return 0


if __name__ == "__main__":
    try:
        sys.exit(main(sys.argv[1:]))
    except Exception as exc:  # surface everything in the log, fail loudly
        print(f"solve_lp.py error: {exc}", file=sys.stderr)
        sys.exit(1)
