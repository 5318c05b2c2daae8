"""Command-line front end.

Every subcommand prints a keyed ``name = value`` report (valid TOML) to
stdout.  Rationals are printed as quoted ``"p/q"`` strings.  Exit status is
0 when the command ran (whether or not the checked property holds) and 2 on
malformed input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import generate, io
from .invariance import (EXHAUSTIVE_LIMIT, FiniteAction, cesaro_limit, dirac, f2_prefix_certificate,
                         f2ball, fixed_points, indicator_family, infeasibility_witness,
                         invariant_measures, is_invariant, is_multiplicative, mover_text,
                         natural_structure, paradox_search, paradox_verify, build_invariance_theory)
from .logic import FormulaError, parse_formula, print_formula
from .nip import (almost_defines, almost_dependence_check, dk_measure, independence_dimension,
                  l1_distance, ladder_from_shattering, quotient_types)
from .rational import fmt, to_rational
from .stability import (TypeVector, check_ladder, is_definable_by, ladder_index, nearest_rows,
                        phi_matrix, type_metric)
from .structures import (evaluate, minimalize, satisfies_theory, sup_norm,
                         tarski_vaught_check)
from .topometric import INF, cb_rank, cb_sequence, validate_topometric


class InputError(ValueError):
    pass


@dataclass
class CommandReport:
    status: str = "ok"  # ok | property-fails | input-error
    payload: list[tuple[str, Any]] = field(default_factory=list)

    def add(self, key: str, value: Any) -> "CommandReport":
        self.payload.append((key, value))
        return self

    @property
    def exit_code(self) -> int:
        return 2 if self.status == "input-error" else 0

    def render(self) -> str:
        lines = [f"status = {_value('status', self.status)}"]
        lines += [f"{key} = {_value(key, value)}" for key, value in self.payload]
        return "\n".join(lines) + "\n"


class Multiline(str):
    """Rendered as a TOML multi-line literal string."""


def _value(key: str, value: Any) -> str:
    if isinstance(value, Multiline):
        if "'''" in value:
            return json.dumps(str(value))
        return "'''\n" + value + "'''"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return f'"{fmt(value)}"'
    if isinstance(value, float) and value == INF:
        return "inf"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_value(key, v) for v in value) + "]"
    raise TypeError(f"cannot render {key} = {value!r}")


# ---------------------------------------------------------------------------
# argument helpers


def _rational(text: str) -> Fraction:
    try:
        return to_rational(text)
    except (TypeError, ValueError):
        raise InputError(f"not an exact rational: {text!r}") from None


def _vector(text: str) -> tuple[Fraction, ...]:
    parts = [p for p in text.replace(",", " ").split() if p]
    return tuple(_rational(p) for p in parts)


def _labels_in(text: str, labels: Sequence[str], what: str = "point") -> list[int]:
    out = []
    for p in (q for q in text.replace(",", " ").split() if q):
        if p not in labels:
            raise InputError(f"unknown {what} {p!r}")
        out.append(labels.index(p))
    return out


def _points(indices, labels) -> list[str]:
    return [labels[i] for i in sorted(indices)]


def _structure(path):
    return io.parse_structure(io.read_text(path), path)


def _action(path) -> FiniteAction:
    return io.parse_action(io.read_text(path), path)


def _family(path):
    return io.parse_family(io.read_text(path), path)


def _matrix(path):
    return io.parse_matrix(io.read_text(path), path)


def _space(path):
    return io.parse_space(io.read_text(path), path)


def _formula(text, struct):
    return parse_formula(text, struct.signature)


def _assignment(items: Sequence[str], struct) -> dict[str, int]:
    env = {}
    for item in items or ():
        var, sep, point = item.partition("=")
        if not sep:
            raise InputError(f"assignment {item!r} must look like var=point")
        env[var.strip()] = _labels_in(point, struct.points)[0]
    return env


def _thresholds(args) -> tuple[Fraction, Fraction]:
    r, s = (_rational(v) for v in args.thresholds)
    if not r > s:
        raise InputError("--thresholds r s needs r > s")
    return r, s


# ---------------------------------------------------------------------------
# structures


def cmd_eval(args) -> CommandReport:
    st = _structure(args.structure)
    phi = _formula(args.formula, st)
    value = evaluate(st, phi, _assignment(args.assign, st))
    return CommandReport().add("value", value).add("bound", phi.bound)


def cmd_check_theory(args) -> CommandReport:
    st = _structure(args.structure)
    theory = io.parse_theory_file(io.read_text(args.theory), st.signature, args.theory)
    rep = satisfies_theory(st, theory)
    out = CommandReport("ok" if rep.passed else "property-fails")
    out.add("satisfied", rep.passed).add("checked", rep.checked)
    if not rep.passed:
        out.add("failing", rep.failing.text()).add("label", rep.failing.label)
        out.add("value", rep.value).add("threshold", rep.failing.threshold)
    return out


def cmd_supnorm(args) -> CommandReport:
    st = _structure(args.structure)
    phi = _formula(args.formula, st)
    return CommandReport().add("norm", sup_norm(st, phi)).add("bound", phi.bound)


def cmd_minimalize(args) -> CommandReport:
    st = _structure(args.structure)
    part = minimalize(st, [_formula(f, st) for f in args.fragment or ()])
    return CommandReport().add("blocks", [[st.points[i] for i in b] for b in part.blocks])


def cmd_tv_check(args) -> CommandReport:
    small, large = _structure(args.small), _structure(args.large)
    embedding = [None] * len(small)
    for item in args.embedding.replace(",", " ").split():
        a, sep, b = item.partition("=")
        if not sep:
            raise InputError(f"embedding entry {item!r} must look like p=q")
        embedding[_labels_in(a, small.points)[0]] = _labels_in(b, large.points)[0]
    if None in embedding:
        raise InputError("embedding must map every point of the small structure")
    fragment = []
    for text in args.fragment or ():
        phi = _formula(text, small)
        var = args.var if args.var in phi.free_vars else min(phi.free_vars, default="_")
        fragment.append((phi, var))
    rep = tarski_vaught_check(small, large, embedding, fragment)
    out = CommandReport("ok" if rep.passed else "property-fails")
    out.add("passed", rep.passed).add("checked", rep.checked)
    if not rep.passed:
        out.add("formula", print_formula(rep.formula))
        out.add("parameters", [f"{v}={small.points[i]}" for v, i in sorted(rep.params.items())])
        out.add("large_measure", rep.large_measure).add("trace_measure", rep.trace_measure)
        out.add("small_measure", rep.small_measure)
    return out


# ---------------------------------------------------------------------------
# invariance


def cmd_invariant_measure(args) -> CommandReport:
    act = _action(args.action)
    res = invariant_measures(act)
    out = CommandReport().add("feasible", res.feasible)
    if res.feasible:
        out.add("measure", list(res.measure))
    else:
        out.add("farkas_total", res.dual_total)
        out.add("farkas_rows", [f"{act.semigroup.elements[s]}:{act.points[y]}"
                                for s, y in sorted(res.dual)])
        out.add("farkas_weights", [res.dual[k] for k in sorted(res.dual)])
    return out


def cmd_duality_witness(args) -> CommandReport:
    act = _action(args.action)
    if invariant_measures(act).feasible:
        raise InputError("feasible: the action has an invariant measure, so no witness exists")
    w = infeasibility_witness(act)
    out = CommandReport().add("norm", w.norm).add("h", list(w.h))
    out.add("elements", [act.semigroup.elements[s] for _, s in w.pairs])
    for k, (f, _) in enumerate(w.pairs):
        out.add(f"f{k}", list(f))
    return out


def cmd_cesaro(args) -> CommandReport:
    act = _action(args.action)
    names = act.semigroup.elements
    chosen = _labels_in(args.elements, names, "element") if args.elements else range(len(names))
    x0 = _labels_in(args.start, act.points)[0]
    try:
        mu = cesaro_limit([act.act[s] for s in chosen], x0)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = CommandReport().add("measure", list(mu))
    return out.add("invariant", is_invariant(act, mu))


def cmd_fixed_points(args) -> CommandReport:
    act = _action(args.action)
    return CommandReport().add("fixed_points", _points(fixed_points(act), act.points))


def _measure_arg(args, act) -> tuple[Fraction, ...]:
    if args.dirac:
        return dirac(len(act), _labels_in(args.dirac, act.points)[0])
    if args.measure:
        mu = _vector(args.measure)
        if len(mu) != len(act):
            raise InputError("measure length does not match the point set")
        return mu
    raise InputError("give --measure or --dirac")


def cmd_multiplicative_check(args) -> CommandReport:
    act = _action(args.action)
    mu = _measure_arg(args, act)
    family = list(_family(args.family).functions) if args.family else indicator_family(len(act))
    mult = is_multiplicative(mu, family)
    inv = is_invariant(act, mu)
    out = CommandReport("ok" if mult and inv else "property-fails")
    return out.add("multiplicative", mult).add("invariant", inv)


def cmd_gen_theory(args) -> CommandReport:
    act = _action(args.action)
    n = len(act)
    if args.family:
        fam = _family(args.family)
        if fam.points != act.points:
            raise InputError("family carrier must list the action's points in order")
        family = {names[0]: f for names, f in zip(fam.names, fam.functions)}
    else:
        family = {"one": (Fraction(1),) * n}
        family.update({f"ind_{p}": dirac(n, x) for x, p in enumerate(act.points)})
    theory, sig, closed = build_invariance_theory(act, family, args.multiplicative)
    out = CommandReport().add("statements", len(theory)).add("family", list(closed))
    if args.measure or args.dirac:
        st = natural_structure(act, sig, closed, _measure_arg(args, act))
        rep = satisfies_theory(st, theory)
        out.status = "ok" if rep.passed else "property-fails"
        out.add("satisfied", rep.passed)
        if not rep.passed:
            out.add("failing", rep.failing.text()).add("label", rep.failing.label)
    return out.add("theory", Multiline(theory.text()))


def _partial(args):
    if args.f2ball is not None:
        return f2ball(args.f2ball)
    if args.partial:
        return io.parse_partial_action(io.read_text(args.partial), args.partial)
    raise InputError("give --partial or --f2ball")


def cmd_paradox_verify(args) -> CommandReport:
    if args.prefix_certificate is not None:
        pa, cert = f2_prefix_certificate(args.prefix_certificate)
    else:
        pa = _partial(args)
        if not args.certificate:
            raise InputError("give --certificate or --prefix-certificate")
        cert = io.parse_certificate(io.read_text(args.certificate), pa, args.certificate)
    rep = paradox_verify(pa, cert)
    out = CommandReport("ok" if rep.exact else "property-fails")
    out.add("exact", rep.exact).add("target_size", len(cert.target))
    out.add("undefined", rep.undefined_count).add("escaped", rep.escaped_count)
    out.add("uncovered_1_count", len(rep.uncovered_1)).add("uncovered_2_count", len(rep.uncovered_2))
    limit = args.limit
    out.add("uncovered_1", _points(rep.uncovered_1, pa.points)[:limit])
    out.add("uncovered_2", _points(rep.uncovered_2, pa.points)[:limit])
    return out


def cmd_paradox_search(args) -> CommandReport:
    pa = _partial(args)
    E = _labels_in(args.set, pa.points) if args.set else range(len(pa.points))
    if len(set(E)) > EXHAUSTIVE_LIMIT and not args.heuristic:
        raise InputError(f"|E| = {len(set(E))} exceeds the exhaustive limit {EXHAUSTIVE_LIMIT}; "
                         "rerun with --heuristic")
    cert = paradox_search(pa, E, args.max_pieces, pa.movers(args.mover_length), args.heuristic)
    out = CommandReport().add("found", cert is not None)
    if cert is not None:
        for side, pieces in (("a", cert.a_pieces), ("b", cert.b_pieces)):
            out.add(f"{side}_pieces", [_points(p, pa.points) for p, _ in pieces])
            out.add(f"{side}_movers", [mover_text(m) for _, m in pieces])
    return out


def cmd_f2ball(args) -> CommandReport:
    if args.radius < 0:
        raise InputError("radius must be non-negative")
    pa, cert = f2_prefix_certificate(args.radius)
    rep = paradox_verify(pa, cert)
    out = CommandReport().add("radius", args.radius).add("size", len(pa.points))
    out.add("prefix_cover_1_defect", len(rep.uncovered_1))
    return out.add("words", list(pa.points[:args.limit]))


# ---------------------------------------------------------------------------
# stability


def cmd_phi_matrix(args) -> CommandReport:
    st = _structure(args.structure)
    m = phi_matrix(st, _formula(args.formula, st), args.row_var, args.col_var)
    out = CommandReport().add("bound", m.bound).add("rows", list(m.row_labels))
    out.add("cols", list(m.col_labels))
    return out.add("matrix", Multiline(io.dump_matrix(m)))


def cmd_ladder(args) -> CommandReport:
    m = _matrix(args.matrix)
    r, s = _thresholds(args)
    k, w = ladder_index(m, r, s, "lower_bound" if args.lower_bound else "exact")
    out = CommandReport().add("index", k).add("mode", "lower_bound" if args.lower_bound else "exact")
    out.add("rows", [m.row_labels[i] for i in w.rows]).add("cols", [m.col_labels[j] for j in w.cols])
    return out.add("witness_valid", check_ladder(m, w))


def _type(text: str, labels: Sequence[str] | None = None) -> TypeVector:
    values = _vector(text)
    if labels is not None and len(labels) != len(values):
        raise InputError(f"type vector needs {len(labels)} values")
    return TypeVector.of(values, labels)


def cmd_type_metric(args) -> CommandReport:
    p, q = _type(args.p), _type(args.q)
    if len(p.values) != len(q.values):
        raise InputError("type vectors have different lengths")
    return CommandReport().add("distance", type_metric(p, q))


def cmd_nearest_rows(args) -> CommandReport:
    m = _matrix(args.matrix)
    d, rows = nearest_rows(m, _type(args.type, m.col_labels), _rational(args.epsilon))
    return CommandReport().add("distance", d).add("rows", [m.row_labels[i] for i in rows])


def cmd_definable_check(args) -> CommandReport:
    m = _matrix(args.matrix)
    p, psi = _type(args.type, m.col_labels), _type(args.psi, m.col_labels)
    ok = is_definable_by(m, p, psi, _rational(args.epsilon))
    out = CommandReport("ok" if ok else "property-fails")
    return out.add("definable", ok).add("distance", type_metric(p, psi))


# ---------------------------------------------------------------------------
# dependence


def _set_arg(args, fam):
    return _labels_in(args.set, fam.points) if args.set else None


def cmd_dk_measure(args) -> CommandReport:
    fam = _family(args.family)
    r, s = _thresholds(args)
    E = fam.index_set(_set_arg(args, fam))
    value = dk_measure(fam, E, s, r, args.k)
    return CommandReport().add("dk", value).add("full", fam.measure(E) ** (2 * args.k))


def cmd_nip_check(args) -> CommandReport:
    fam = _family(args.family)
    r, s = _thresholds(args)
    v = almost_dependence_check(fam, _set_arg(args, fam), s, r, args.kmax)
    out = CommandReport().add("exhausted", v.exhausted)
    if v.exhausted:
        out.add("kmax", args.kmax).add("epsilon", v.epsilon)
    else:
        out.add("k", v.k).add("dk", v.dk).add("full", v.full)
    out.add("history_dk", [dk for _, dk, _ in v.history])
    return out.add("history_full", [full for _, _, full in v.history])


def cmd_ind_dim(args) -> CommandReport:
    fam = _family(args.family)
    r, s = _thresholds(args)
    k, w = independence_dimension(fam, s, r)
    out = CommandReport().add("dimension", k).add("shattered", [fam.points[i] for i in w])
    if k:
        m, wit = ladder_from_shattering(fam, w, s, r)
        out.add("ladder_rows", [m.row_labels[i] for i in wit.rows])
        out.add("ladder_valid", check_ladder(m, wit))
    return out


def cmd_l1(args) -> CommandReport:
    xi, xi2, mu = _vector(args.xi), _vector(args.xi2), _vector(args.mu)
    if not len(xi) == len(xi2) == len(mu):
        raise InputError("vectors and measure must have equal length")
    d = l1_distance(xi, xi2, mu)
    same = all(u == v for u, v, w in zip(xi, xi2, mu) if w)
    return CommandReport().add("distance", d).add("same_class", same)


def cmd_almost_defines(args) -> CommandReport:
    psi, p, mu = _type(args.psi), _type(args.type), _vector(args.mu)
    if not len(psi.values) == len(p.values) == len(mu):
        raise InputError("vectors and measure must have equal length")
    ok = almost_defines(psi, p, mu)
    return CommandReport("ok" if ok else "property-fails").add("almost_defines", ok)


def cmd_quotient(args) -> CommandReport:
    types = [_type(t) for t in args.type or ()]
    mu = _vector(args.mu)
    if any(len(t.values) != len(mu) for t in types):
        raise InputError("every type vector must match the measure's length")
    return CommandReport().add("classes", quotient_types(types, mu))


# ---------------------------------------------------------------------------
# topometric


def cmd_topo_validate(args) -> CommandReport:
    space = _space(args.space)
    bad = validate_topometric(space)
    out = CommandReport("ok" if not bad else "property-fails").add("valid", not bad)
    out.add("violation_kinds", [v.kind for v in bad][:args.limit])
    return out.add("violations", [v.detail for v in bad][:args.limit])


def cmd_cb(args) -> CommandReport:
    space = _space(args.space)
    eps = _rational(args.epsilon)
    if eps < 0:
        raise InputError("epsilon must be non-negative")
    seq = cb_sequence(space, eps)
    out = CommandReport().add("steps", len(seq.stages) - 1)
    for a, X in enumerate(seq.stages):
        out.add(f"stage_{a}", _points(X, space.points))
    out.add("stable", _points(seq.limit, space.points))
    U = _labels_in(args.set, space.points) if args.set else range(len(space))
    if not U:
        raise InputError("--set must be non-empty")
    return out.add("rank", cb_rank(space, eps, U))


# ---------------------------------------------------------------------------
# corpus generation


def cmd_gen_corpus(args) -> CommandReport:
    rng = random.Random(args.seed)
    if args.kind == "structure":
        text = io.dump_structure(generate.structure(rng, generate.signature(rng)))
    elif args.kind == "formula":
        sig = generate.signature(rng)
        text = "".join(print_formula(generate.formula(rng, sig)) + "\n" for _ in range(args.count))
    elif args.kind == "matrix":
        text = io.dump_matrix(generate.matrix(rng))
    elif args.kind == "family":
        text = io.dump_family(generate.family(rng, rng.randint(1, 6), rng.randint(1, 6)))
    else:
        text = io.dump_space(generate.topo_space(rng, rng.randint(1, 6)))
    return CommandReport().add("kind", args.kind).add("seed", args.seed).add("content", Multiline(text))


# ---------------------------------------------------------------------------
# parser


def _add(sub, name: str, func: Callable, concept: str, help_text: str):
    p = sub.add_parser(name, help=help_text,
                       description=f"{help_text}\n\nconcept: {concept}",
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.set_defaults(func=func)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ilw", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def thresholds(p):
        p.add_argument("--thresholds", nargs=2, metavar=("R", "S"), required=True,
                       help="upper and lower thresholds, R > S")

    p = _add(sub, "eval", cmd_eval, "semantics of integral-logic formulas",
             "evaluate a formula on a structure")
    p.add_argument("--structure", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--assign", action="append", metavar="VAR=POINT")

    p = _add(sub, "check-theory", cmd_check_theory, "satisfaction of closed statements",
             "check every statement of a theory file")
    p.add_argument("--structure", required=True)
    p.add_argument("--theory", required=True)

    p = _add(sub, "supnorm", cmd_supnorm, "sup norm of a formula", "max |phi| over all assignments")
    p.add_argument("--structure", required=True)
    p.add_argument("--formula", required=True)

    p = _add(sub, "minimalize", cmd_minimalize, "minimal measure structure",
             "partition generated by the sets {x : phi(x) > 0}")
    p.add_argument("--structure", required=True)
    p.add_argument("--fragment", action="append", metavar="FORMULA")

    p = _add(sub, "tv-check", cmd_tv_check, "Tarski-Vaught test for measure substructures",
             "compare level-set measures in N with their traces on M")
    p.add_argument("--small", required=True)
    p.add_argument("--large", required=True)
    p.add_argument("--embedding", required=True, metavar="P=Q,...")
    p.add_argument("--fragment", action="append", metavar="FORMULA")
    p.add_argument("--var", default="x", help="distinguished variable (default x)")

    p = _add(sub, "invariant-measure", cmd_invariant_measure,
             "invariant probability measures of a semigroup action",
             "decide existence of an invariant measure by exact LP")
    p.add_argument("--action", required=True)

    p = _add(sub, "duality-witness", cmd_duality_witness,
             "dual certificate ||1 - sum(f_i.s_i - f_i)|| < 1",
             "functions and elements certifying that no invariant measure exists")
    p.add_argument("--action", required=True)

    p = _add(sub, "cesaro", cmd_cesaro, "Cesaro averages for commuting maps",
             "exact nested Cesaro limit from a start point")
    p.add_argument("--action", required=True)
    p.add_argument("--start", required=True, metavar="POINT")
    p.add_argument("--elements", help="comma-separated elements (default: all)")

    p = _add(sub, "fixed-points", cmd_fixed_points, "common fixed points of an action",
             "points fixed by every element")
    p.add_argument("--action", required=True)

    p = _add(sub, "multiplicative-check", cmd_multiplicative_check,
             "multiplicative invariant measures", "check multiplicativity and invariance of a measure")
    p.add_argument("--action", required=True)
    p.add_argument("--measure", metavar="W1,W2,...")
    p.add_argument("--dirac", metavar="POINT")
    p.add_argument("--family", help="family file (default: point indicators)")

    p = _add(sub, "gen-theory", cmd_gen_theory, "theory of (multiplicative) invariant measures",
             "emit the finite axiom instances for an action")
    p.add_argument("--action", required=True)
    p.add_argument("--family", help="family file on the action's points (default: 1 and indicators)")
    p.add_argument("--multiplicative", action="store_true")
    p.add_argument("--measure", metavar="W1,W2,...", help="also check the natural structure")
    p.add_argument("--dirac", metavar="POINT")

    for name, func, concept, help_text in (
            ("paradox-verify", cmd_paradox_verify, "paradoxical decompositions",
             "defect accounting for a paradox certificate"),
            ("paradox-search", cmd_paradox_search, "paradoxical decompositions",
             "bounded exhaustive search for an exact certificate")):
        p = _add(sub, name, func, concept, help_text)
        p.add_argument("--partial", help="partial action file")
        p.add_argument("--f2ball", type=int, metavar="N", help="use the free-group ball of radius N")
        if name == "paradox-verify":
            p.add_argument("--certificate")
            p.add_argument("--prefix-certificate", type=int, metavar="N",
                           help="built-in prefix certificate on the radius-N ball")
            p.add_argument("--limit", type=int, default=50, help="max points listed per defect set")
        else:
            p.add_argument("--set", metavar="P1,P2,...", help="target set E (default: all points)")
            p.add_argument("--max-pieces", type=int, default=2)
            p.add_argument("--mover-length", type=int, default=1)
            p.add_argument("--heuristic", action="store_true",
                           help=f"allow |E| above the exhaustive limit {EXHAUSTIVE_LIMIT}")

    p = _add(sub, "f2ball", cmd_f2ball, "free group on two generators",
             "reduced words of length <= N and the prefix-certificate defect")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--limit", type=int, default=50, help="max words listed")

    p = _add(sub, "phi-matrix", cmd_phi_matrix, "value matrix of a two-variable formula",
             "tabulate phi(a, b)")
    p.add_argument("--structure", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--row-var", default="x")
    p.add_argument("--col-var", default="y")

    p = _add(sub, "ladder", cmd_ladder, "order property / ladder index",
             "longest ladder at thresholds r > s")
    p.add_argument("--matrix", required=True)
    thresholds(p)
    p.add_argument("--lower-bound", action="store_true", help="greedy lower bound instead of exact")

    p = _add(sub, "type-metric", cmd_type_metric, "metric on types", "sup distance of two types")
    p.add_argument("--p", required=True, metavar="V1,V2,...")
    p.add_argument("--q", required=True, metavar="V1,V2,...")

    p = _add(sub, "nearest-rows", cmd_nearest_rows, "definable types",
             "rows of a matrix closest to a type")
    p.add_argument("--matrix", required=True)
    p.add_argument("--type", required=True, metavar="V1,V2,...")
    p.add_argument("--epsilon", default="0")

    p = _add(sub, "definable-check", cmd_definable_check, "definable types",
             "sup_b |p(b) - psi(b)| <= epsilon")
    p.add_argument("--matrix", required=True)
    p.add_argument("--type", required=True, metavar="V1,V2,...")
    p.add_argument("--psi", required=True, metavar="V1,V2,...")
    p.add_argument("--epsilon", default="0")

    p = _add(sub, "dk-measure", cmd_dk_measure, "almost dependence, D_k sets",
             "exact product measure of D_k(A, E, s, r)")
    p.add_argument("--family", required=True)
    p.add_argument("--set", metavar="P1,P2,...", help="E (default: whole carrier)")
    thresholds(p)
    p.add_argument("--k", type=int, default=1)

    p = _add(sub, "nip-check", cmd_nip_check, "almost dependence, epsilon-FD",
             "least k <= kmax with a D_k defect")
    p.add_argument("--family", required=True)
    p.add_argument("--set", metavar="P1,P2,...")
    thresholds(p)
    p.add_argument("--kmax", type=int, default=3)

    p = _add(sub, "ind-dim", cmd_ind_dim, "independence property, shattering",
             "largest shattered tuple at thresholds")
    p.add_argument("--family", required=True)
    thresholds(p)

    p = _add(sub, "l1", cmd_l1, "L1 space of classes", "integral of |xi - xi'|")
    p.add_argument("--xi", required=True)
    p.add_argument("--xi2", required=True)
    p.add_argument("--mu", required=True)

    p = _add(sub, "almost-defines", cmd_almost_defines, "almost definable types",
             "psi = p on every column of positive weight")
    p.add_argument("--psi", required=True)
    p.add_argument("--type", required=True)
    p.add_argument("--mu", required=True)

    p = _add(sub, "quotient", cmd_quotient, "almost equality of types",
             "group type vectors by equality almost everywhere")
    p.add_argument("--type", action="append", required=True)
    p.add_argument("--mu", required=True)

    p = _add(sub, "topo-validate", cmd_topo_validate, "topometric spaces",
             "check the topometric axioms on a finite space")
    p.add_argument("--space", required=True)
    p.add_argument("--limit", type=int, default=50, help="max violations listed")

    p = _add(sub, "cb", cmd_cb, "epsilon Cantor-Bendixson rank",
             "derivative sequence and rank of a set")
    p.add_argument("--space", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--set", metavar="P1,P2,...", help="U (default: whole space)")

    p = _add(sub, "gen-corpus", cmd_gen_corpus, "seeded random inputs",
             "print a random instance in the matching file format")
    p.add_argument("--kind", choices=("structure", "formula", "matrix", "family", "space"),
                   default="structure")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=5, help="number of formulas")
    return parser


def run_command(argv: Sequence[str]) -> CommandReport:
    args = build_parser().parse_args(list(argv))
    try:
        return args.func(args)
    except (InputError, io.FileFormatError, FormulaError, ValueError, IndexError) as exc:
        return CommandReport("input-error").add("error", str(exc))


def main(argv: Sequence[str] | None = None) -> int:
    report = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(report.render())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
