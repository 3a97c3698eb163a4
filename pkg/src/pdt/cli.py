"""Command-line front end: ``pdt <command> [input.json] [flags]``.

Every command reads one JSON document (file path or ``-`` for stdin) and prints a
report ``{"status", "payload", "diagnostics", "version", "command"}``.  Exit codes:
0 ok, 1 a checked hypothesis fails, 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from . import arrangement as arr_mod
from . import geomclass as geo
from . import linalg as la
from . import monodromy as mono
from . import period as per
from . import qspace as qs
from . import serialize as ser
from .errors import ClassificationError, HypothesisFailure, MalformedInputError, NoConvergenceError, PdtError

OK, FAIL, ERROR = "ok", "fail", "error"
EXIT = {OK: 0, FAIL: 1, ERROR: 2}


@dataclass
class Options:
    text: bool = False
    seed: int = 0
    tol: float | None = None
    height: int = 2
    degree: int = 3


@dataclass
class Result:
    status: str
    payload: Any
    diagnostics: list = field(default_factory=list)


# -- shared parsing -----------------------------------------------------------------------


def _space(doc, path="$"):
    return ser.space(ser.field(doc, "space", path), f"{path}.space")


def _arrangement(doc) -> arr_mod.Arrangement:
    sp = _space(doc)
    if "normals" in doc:
        normals = ser.field(doc, "normals", "$")
        if not isinstance(normals, list):
            raise ser.SchemaError("$.normals", "expected an array of vectors")
        vecs = [ser.vector(v, f"$.normals[{i}]", sp.dim) for i, v in enumerate(normals)]
        return arr_mod.Arrangement.from_normals(sp, vecs)
    hs = ser.field(doc, "hyperplanes", "$", [])
    if not isinstance(hs, list):
        raise ser.SchemaError("$.hyperplanes", "expected an array of subspaces")
    return arr_mod.Arrangement(sp, tuple(ser.subspace(sp, h, f"$.hyperplanes[{i}]") for i, h in enumerate(hs)))


def _isotropics(sp, doc) -> list:
    items = ser.field(doc, "isotropics", "$", [])
    if not isinstance(items, list):
        raise ser.SchemaError("$.isotropics", "expected an array")
    out = []
    for i, it in enumerate(items):
        kind = ser.field(it, "kind", f"$.isotropics[{i}]")
        try:
            out.append(arr_mod.IsotropicDatum(kind, ser.subspace(sp, it, f"$.isotropics[{i}]")))
        except ser.SchemaError:
            raise
        except MalformedInputError as exc:
            raise ser.SchemaError(f"$.isotropics[{i}]", str(exc)) from exc
    return out


def _nilpotent(doc, opts: Options) -> tuple[mono.NilpotentData, list]:
    sp = _space(doc)
    diags = []
    if "N" in doc:
        n = ser.matrix(doc["N"], "$.N", sp.dim, sp.dim)
        return mono.classify_nilpotent(sp, n), diags
    t = ser.matrix(ser.field(doc, "T", "$"), "$.T", sp.dim, sp.dim)
    t, k = _unipotent(sp, t, doc)
    if k != 1:
        diags.append(f"T replaced by T^{k} to make it unipotent")
    nd = mono.log_unipotent(mono.MonodromyOperator(sp, t))
    return mono.classify_nilpotent(sp, nd.N), diags


def _unipotent(sp, t, doc):
    if doc.get("power") == "auto":
        k = mono.unipotent_power(sp, t)
        return la.mat_pow(t, k), k
    return t, 1


def _nd_payload(nd: mono.NilpotentData) -> dict:
    out = {"case": nd.case, "N": nd.N, "J": nd.J, "J0": nd.J0}
    if nd.e is not None:
        out.update(e=nd.e, u=nd.u, u_norm=nd.u_norm, polarized=nd.polarized)
    return out


def _samples(doc) -> per.PeriodSampleSet:
    mdoc = ser.field(doc, "monodromy", "$")
    sp = _space(mdoc, "$.monodromy")
    t = ser.matrix(ser.field(mdoc, "T", "$.monodromy"), "$.monodromy.T", sp.dim, sp.dim)
    items = ser.field(doc, "samples", "$")
    if not isinstance(items, list):
        raise ser.SchemaError("$.samples", "expected an array")
    samples = []
    for i, it in enumerate(items):
        w = ser.complex_scalar(ser.field(it, "w", f"$.samples[{i}]"), f"$.samples[{i}].w")
        alpha = ser.complex_vector(ser.field(it, "alpha", f"$.samples[{i}]"), f"$.samples[{i}].alpha", sp.dim)
        samples.append((complex(w), np.asarray([complex(x) for x in alpha])))
    return per.PeriodSampleSet(mono.MonodromyOperator(sp, t), tuple(samples))


# -- commands -----------------------------------------------------------------------------


def cmd_signature(doc, opts):
    if not isinstance(doc, dict):
        raise ser.SchemaError("$", "expected an object")
    sp = _space(doc) if "space" in doc else ser.space(doc, "$")
    p, q, r = qs.signature(sp)
    return Result(OK, {"p": p, "q": q, "r": r})


def cmd_classify_subspace(doc, opts):
    sp = _space(doc)
    v = ser.subspace(sp, ser.field(doc, "subspace", "$"), "$.subspace")
    base = {"radical": qs.radical(v), "signature": v.signature}
    if sp.nondegenerate:
        base["orthogonal_complement"] = qs.orthogonal_complement(v)
    try:
        c = qs.classify_subspace(v)
    except ClassificationError as exc:
        return Result(FAIL, {**base, "tag": None}, [str(exc)])
    payload = {
        **base,
        "tag": c.tag,
        "perp_signature": c.perp_signature,
        "side_conditions": c.side_conditions,
    }
    failed = [k for k, ok in c.side_conditions.items() if not ok]
    return Result(OK if not failed else FAIL, payload, [f"side condition fails: {k}" for k in failed])


def cmd_eigenspace(doc, opts):
    sp = _space(doc)
    rho = ser.matrix(ser.field(doc, "rho", "$"), "$.rho", sp.dim, sp.dim)
    l = ser.field(doc, "l", "$")
    if not isinstance(l, int) or isinstance(l, bool):
        raise ser.SchemaError("$.l", "expected an integer")
    e = qs.eigenspace_chi(sp, rho, l)
    return Result(
        OK,
        {
            "l": l,
            "dim": e.dim,
            "chi_basis": e.chi_basis,
            "herm_signature": e.herm_signature,
            "herm_nullity": e.herm_nullity,
            "real_model": e.real_model(),
        },
    )


def cmd_monodromy_log(doc, opts):
    sp = _space(doc)
    t = ser.matrix(ser.field(doc, "T", "$"), "$.T", sp.dim, sp.dim)
    t, k = _unipotent(sp, t, doc)
    nd = mono.log_unipotent(mono.MonodromyOperator(sp, t))
    payload = {"N": nd.N, "power": k, "exp_N_equals_T": mono.exp_series(nd.N) == t}
    ws = ser.field(doc, "w", "$", [])
    if ws:
        if not isinstance(ws, list):
            raise ser.SchemaError("$.w", "expected an array of rationals")
        cls = mono.classify_nilpotent(sp, nd.N)
        payload["one_param"] = [
            {"w": w, "matrix": mono.one_param(cls, w)}
            for w in (ser.rational(x, f"$.w[{i}]") for i, x in enumerate(ws))
        ]
    return Result(OK, payload)


def cmd_classify_degeneration(doc, opts):
    nd, diags = _nilpotent(doc, opts)
    return Result(OK, _nd_payload(nd), diags)


def cmd_weight_filtration(doc, opts):
    nd, diags = _nilpotent(doc, opts)
    wf = mono.weight_filtration(nd)
    jm = mono.jacobson_morozov(nd.space, nd.N)
    lo, hi = min(wf.indices + jm.indices), max(wf.indices + jm.indices)
    agree = all(wf[k] == jm[k] for k in range(lo, hi + 1))
    steps = [{"k": k, "W": s} for k, s in wf.steps]
    return Result(OK if agree else FAIL, {"case": nd.case, "steps": steps, "agrees_with_generic": agree}, diags)


def cmd_untwist(doc, opts):
    ps = _samples(doc)
    pts = per.untwist(ps, tol=opts.tol or per.EPS, check_domain=doc.get("check_domain", True))
    return Result(OK, {"points": [{"s": s, "phi": phi} for s, phi in pts]})


def cmd_limit_period(doc, opts):
    ps = _samples(doc)
    nd = mono.classify_nilpotent(ps.space, mono.log_unipotent(ps.monodromy).N)
    try:
        line = per.limit_line(
            ps, nd, degree=opts.degree, tol=opts.tol or per.EXTRAPOLATION_TOL,
            check_domain=doc.get("check_domain", True),
        )
    except NoConvergenceError as exc:
        return Result(FAIL, {"diagnostics": exc.diagnostics}, [str(exc)])
    acc = per.accumulation_line(nd, line.vector)
    payload = {
        "F_lim": line.vector,
        "residual": line.residual,
        "degree": line.degree,
        "samples": line.samples,
        "case": nd.case,
        "accumulation_line": acc,
    }
    status, diags = OK, []
    if "V" in doc:
        v = ser.subspace(ps.space, doc["V"], "$.V")
        rep = per.check_limit_orthogonality(ps.space, acc, v)
        payload["orthogonality"] = rep
        if not rep["passed"]:
            status = FAIL
            diags.append("accumulation line is not orthogonal to V")
        try:
            mhs = per.limit_mhs(v, line.vector)
            payload["limit_mhs"] = {
                "tag": mhs.tag,
                "radical": mhs.radical,
                "weights": mhs.weights,
                "F_on_radical": mhs.f_on_radical,
            }
        except (ClassificationError, MalformedInputError) as exc:
            diags.append(f"limit_mhs not applicable: {exc}")
    return Result(status, payload, diags)


def cmd_check_orthogonality(doc, opts):
    sp = _space(doc)
    f = ser.complex_vector(ser.field(doc, "F", "$"), "$.F", sp.dim)
    v = ser.subspace(sp, ser.field(doc, "V", "$"), "$.V")
    rep = per.check_limit_orthogonality(sp, np.asarray([complex(x) for x in f]), v, opts.tol or 1e-8)
    return Result(OK if rep["passed"] else FAIL, rep)


def cmd_psi_verify(doc, opts):
    sp = _space(doc)
    alpha = ser.complex_vector(ser.field(doc, "alpha", "$"), "$.alpha", sp.dim)
    tol = opts.tol or 1e-12
    exact = per.is_exact(alpha)
    checks, payload = {}, {"hodge_norm": per.hodge_norm(sp, alpha), "exact": exact}

    def close(a, b):
        if exact and not isinstance(a, (complex, float)) and not isinstance(b, (complex, float)):
            return a == b
        return abs(complex(a) - complex(b)) <= tol * max(1.0, abs(complex(a)), abs(complex(b)))

    if "tau" in doc:
        e0 = ser.vector(ser.field(doc, "e0", "$"), "$.e0", sp.dim)
        e1 = ser.vector(ser.field(doc, "e1", "$"), "$.e1", sp.dim)
        tau = ser.complex_scalar(doc["tau"], "$.tau")
        m = per.psi_tau(sp, e0, e1, tau)
        b = per.apply(m, alpha)
        checks["psi_tau_preserves_form"] = close(per.bil(sp, b, b), per.bil(sp, alpha, alpha))
        checks["psi_tau_norm_identity"] = close(per.herm(sp, b), per.psi_tau_norm_rhs(sp, alpha, e0, e1, tau))
        payload["psi_tau_alpha"] = b
        payload["oriented_plane_sign"] = per.oriented_plane_sign(sp, alpha, e0, e1)
    if "f" in doc:
        e = ser.vector(ser.field(doc, "e", "$"), "$.e", sp.dim)
        f = ser.complex_vector(doc["f"], "$.f", sp.dim)
        m = per.psi_ef(sp, e, f)
        b = per.apply(m, alpha)
        checks["psi_ef_preserves_form"] = close(per.bil(sp, b, b), per.bil(sp, alpha, alpha))
        checks["psi_ef_norm_identity"] = close(per.herm(sp, b), per.psi_ef_norm_rhs(sp, alpha, e, f))
        payload["psi_ef_alpha"] = b
        payload["tube_coords"] = per.tube_coords(sp, alpha, e)
        payload["tube_coords_image"] = per.tube_coords(sp, b, e)
    if "witness" in doc:
        w = per.DomainWitness(sp, ser.complex_vector(doc["witness"], "$.witness", sp.dim))
        payload["in_domain"] = per.in_domain(alpha, w)
        payload["same_component_as_witness"] = per.same_component(sp, alpha, w.basepoint)
    payload["checks"] = checks
    failed = [k for k, ok in checks.items() if not ok]
    return Result(OK if not failed else FAIL, payload, [f"identity fails: {k}" for k in failed])


def cmd_arrangement_k1(doc, opts):
    arr = _arrangement(doc)
    payload = {"K1": arr_mod.build_K1(arr)}
    planes = [i for i in _isotropics(arr.space, doc) if i.kind == "plane"]
    if planes:
        payload["K_J"] = [{"J": p.subspace, "K_J": arr_mod.K_J_plane(arr, p)} for p in planes]
    pairs = ser.field(doc, "pairs", "$", [])
    if pairs:
        out = []
        for i, pr in enumerate(pairs):
            a = ser.subspace(arr.space, ser.field(pr, "a", f"$.pairs[{i}]"), f"$.pairs[{i}].a")
            b = ser.subspace(arr.space, ser.field(pr, "b", f"$.pairs[{i}]"), f"$.pairs[{i}].b")
            out.append({"sum": qs.subspace_sum(a, b), "intersection": qs.subspace_intersect(a, b)})
        payload["pairs"] = out
    return Result(OK, payload)


def _cells_payload(d: arr_mod.ConeDecomposition) -> dict:
    return {
        "e": d.e,
        "complement": d.complement,
        "form": d.form,
        "functionals": d.functionals,
        "members": d.members,
        "cone_witness": d.cone_witness,
        "chambers": len(d.chambers),
        "cells": [
            {"signs": "".join(c.sign_vector), "dim": c.dim, "witness": c.witness, "K_sigma": c.K_sigma}
            for c in d.cells
        ],
        "face_pairs": d.face_pairs(),
    }


def cmd_cone_cells(doc, opts):
    arr = _arrangement(doc)
    line = ser.field(doc, "line", "$")
    try:
        j = arr_mod.IsotropicDatum("line", ser.subspace(arr.space, line, "$.line"))
    except ser.SchemaError:
        raise
    except MalformedInputError as exc:
        raise ser.SchemaError("$.line", str(exc)) from exc
    e = ser.vector(doc["e"], "$.e", arr.space.dim) if "e" in doc else None
    w = ser.vector(doc["cone_witness"], "$.cone_witness") if "cone_witness" in doc else None
    d = arr_mod.cone_decomposition(arr, j, e, w, seed=opts.seed)
    return Result(OK, _cells_payload(d))


def _poset_payload(p: arr_mod.StratumPoset) -> dict:
    return {
        "view": p.view,
        "nodes": [{"tag": n.tag, "label": n.label, "K": n.K} for n in p.nodes],
        "cover_relations": p.cover_relations,
        "dot": p.to_dot(),
    }


def cmd_strata_poset(doc, opts):
    arr = _arrangement(doc)
    isos = _isotropics(arr.space, doc)
    view = ser.field(doc, "view", "$", "faces")
    if view not in ("faces", "quotient"):
        raise ser.SchemaError("$.view", "expected 'faces' or 'quotient'")
    return Result(OK, _poset_payload(arr_mod.strata_poset(arr, isos, view=view, seed=opts.seed)))


def cmd_codim2_check(doc, opts):
    sp = _space(doc)
    try:
        arr = _arrangement(doc)
    except MalformedInputError as exc:
        if sp.dim >= 5:
            raise
        # the dimension clause fails whatever the arrangement is
        rep = {"name": "codim2", "passed": False, "checks": {"dim_at_least_5": False},
               "failures": [{"reason": "dim H < 5", "dim": sp.dim}], "info": {"arrangement": str(exc)}}
        return Result(FAIL, {"codim2": rep, "invar": None}, ["dim H < 5"])
    rep = arr_mod.codim2_criterion(arr, _isotropics(sp, doc), seed=opts.seed).as_dict()
    inv = arr_mod.invar_hypothesis(arr).as_dict()
    status = OK if rep["passed"] and inv["passed"] else FAIL
    diags = [f["reason"] for f in rep["failures"]]
    diags += [f"invar: 2-dimensional intersection with signature {f['signature']}" for f in inv["failures"]]
    return Result(status, {"codim2": rep, "invar": inv}, diags)


def cmd_ball_strata(doc, opts):
    sp = _space(doc)
    rho = ser.matrix(ser.field(doc, "rho", "$"), "$.rho", sp.dim, sp.dim)
    l = ser.field(doc, "l", "$")
    eig = qs.eigenspace_chi(sp, rho, l)
    normals = [ser.vector(v, f"$.normals[{i}]", sp.dim) for i, v in enumerate(ser.field(doc, "normals", "$", []))]
    lines = []
    for i, it in enumerate(ser.field(doc, "lines", "$", [])):
        a = ser.vector(ser.field(it, "a", f"$.lines[{i}]"), f"$.lines[{i}].a", sp.dim)
        b = ser.vector(ser.field(it, "b", f"$.lines[{i}]"), f"$.lines[{i}].b", sp.dim)
        lines.append((a, b))
    p = arr_mod.ball_strata(eig, normals, lines)
    payload = _poset_payload(p)
    payload["herm_signature"] = eig.herm_signature
    payload["type3_nodes"] = arr_mod.type3_nodes(p)
    return Result(OK if not payload["type3_nodes"] else FAIL, payload)


def cmd_enumerate_isotropic(doc, opts):
    if not isinstance(doc, dict):
        raise ser.SchemaError("$", "expected an object")
    sp = _space(doc) if "space" in doc else ser.space(doc, "$")
    found = arr_mod.enumerate_isotropic(sp, opts.height)
    return Result(
        OK,
        {
            "height": opts.height,
            "lines": [d.subspace for d in found if d.kind == "line"],
            "planes": [d.subspace for d in found if d.kind == "plane"],
        },
    )


def cmd_boundary_type(doc, opts):
    w = ser.field(doc, "weight_of_F", "$")
    return Result(OK, {"weight_of_F": w, "type": geo.boundary_pair_type(geo.BoundaryPairDatum(w, doc.get("context", "")))})


def cmd_k3_type(doc, opts):
    sings = doc if isinstance(doc, list) else ser.field(doc, "singularities", "$")
    if not isinstance(sings, list) or not all(isinstance(s, str) for s in sings):
        raise ser.SchemaError("$.singularities", "expected an array of labels")
    t = geo.k3_degeneration_type(sings)
    return Result(OK if t != geo.DegenerationType.UNKNOWN else FAIL, {"type": t})


def cmd_kulikov(doc, opts):
    comps = ser.field(doc, "components", "$")
    if not isinstance(comps, list):
        raise ser.SchemaError("$.components", "expected an array")
    f = geo.KulikovFiber.build(comps, ser.field(doc, "dual_complex", "$"), ser.field(doc, "double_curves", "$"))
    return Result(OK, {"type": geo.kulikov_classify(f)})


def cmd_gauss_lattice(doc, opts):
    r = geo.gauss_lattice_report()
    payload = {
        "signature": r.signature,
        "g_squared_is_minus_one": r.g_squared_is_minus_one,
        "discriminant_order": r.discriminant_order,
        "discriminant_values_mod_2": r.discriminant_values,
        "isotropic_subgroups": r.isotropic_subgroups,
        "has_even_overlattice": r.has_even_overlattice,
        "self_intersection": r.self_intersection,
        "herm_signature": r.herm_signature,
    }
    return Result(OK if r.ok else FAIL, payload)


def cmd_tube_integral(doc, opts):
    doc = doc or {}
    eps = float(ser.field(doc, "epsilon", "$", 1.0))
    pts = ser.field(doc, "points", "$", 128)
    if not isinstance(pts, int) or isinstance(pts, bool):
        raise ser.SchemaError("$.points", "expected an integer")
    v = geo.tube_integral_check(eps, pts)
    err = min(abs(v - 2j * np.pi), abs(v + 2j * np.pi))
    tol = opts.tol or 1e-8
    return Result(OK if err <= tol else FAIL, {"value": v, "error_vs_2pi_i_up_to_sign": err, "points": pts, "tol": tol})


@dataclass(frozen=True)
class Command:
    handler: Callable
    ops: tuple
    needs_input: bool = True


COMMANDS: dict[str, Command] = {
    "signature": Command(cmd_signature, ("signature",)),
    "classify-subspace": Command(cmd_classify_subspace, ("classify_subspace", "radical", "orthogonal_complement")),
    "eigenspace": Command(cmd_eigenspace, ("eigenspace_chi",)),
    "monodromy-log": Command(cmd_monodromy_log, ("log_unipotent", "one_param")),
    "classify-degeneration": Command(cmd_classify_degeneration, ("classify_nilpotent",)),
    "weight-filtration": Command(cmd_weight_filtration, ("weight_filtration",)),
    "untwist": Command(cmd_untwist, ("untwist",)),
    "limit-period": Command(cmd_limit_period, ("limit_line", "limit_mhs")),
    "check-orthogonality": Command(cmd_check_orthogonality, ("check_limit_orthogonality",)),
    "psi-verify": Command(
        cmd_psi_verify, ("psi_tau", "psi_ef", "hodge_norm", "in_domain", "same_component", "tube_coords")
    ),
    "arrangement-k1": Command(cmd_arrangement_k1, ("build_K1", "K_J_plane", "subspace_sum", "subspace_intersect")),
    "cone-cells": Command(cmd_cone_cells, ("cone_decomposition", "K_sigma")),
    "strata-poset": Command(cmd_strata_poset, ("strata_poset",)),
    "codim2-check": Command(cmd_codim2_check, ("codim2_criterion", "invar_hypothesis")),
    "ball-strata": Command(cmd_ball_strata, ("ball_strata",)),
    "enumerate-isotropic": Command(cmd_enumerate_isotropic, ("enumerate_isotropic",)),
    "boundary-type": Command(cmd_boundary_type, ("boundary_pair_type",)),
    "k3-type": Command(cmd_k3_type, ("k3_degeneration_type",)),
    "kulikov": Command(cmd_kulikov, ("kulikov_classify",)),
    "gauss-lattice": Command(cmd_gauss_lattice, ("gauss_lattice_report",), needs_input=False),
    "tube-integral": Command(cmd_tube_integral, ("tube_integral_check",), needs_input=False),
}


# -- running ------------------------------------------------------------------------------------


def run(command: str, doc: Any, opts: Options | None = None) -> dict:
    """Execute one command on a parsed document and return the report dict."""
    opts = opts or Options()
    if command not in COMMANDS:
        return _report(command, Result(ERROR, None, [f"unknown command {command!r}"]))
    try:
        res = COMMANDS[command].handler(doc, opts)
    except MalformedInputError as exc:
        res = Result(ERROR, None, [f"{type(exc).__name__}: {exc}"])
    except (ClassificationError, HypothesisFailure) as exc:
        res = Result(FAIL, None, [f"{type(exc).__name__}: {exc}"])
    except PdtError as exc:
        res = Result(ERROR, None, [f"{type(exc).__name__}: {exc}"])
    return _report(command, res)


def _report(command: str, res: Result) -> dict:
    return {
        "command": command,
        "status": res.status,
        "payload": ser.encode(res.payload),
        "diagnostics": list(res.diagnostics),
        "version": __version__,
    }


def _load(path: str | None, needs_input: bool) -> Any:
    if path is None:
        if needs_input:
            raise ser.SchemaError("$", "an input file (or '-' for stdin) is required")
        return {}
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise ser.SchemaError("$", f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ser.SchemaError(f"$ (line {exc.lineno}, column {exc.colno})", f"invalid JSON: {exc.msg}") from exc


def run_file(command: str, path: str | None, opts: Options) -> dict:
    try:
        needs = COMMANDS[command].needs_input if command in COMMANDS else True
        doc = _load(path, needs)
    except MalformedInputError as exc:
        return _report(command, Result(ERROR, None, [str(exc)]))
    return run(command, doc, opts)


def batch(manifest_path: str, opts: Options, workers: int = 1) -> dict:
    """Run every (command, input) entry of a manifest; entries are independent."""
    try:
        manifest = _load(manifest_path, True)
    except MalformedInputError as exc:
        return _report("batch", Result(ERROR, None, [str(exc)]))
    entries = manifest.get("entries", []) if isinstance(manifest, dict) else manifest
    if not isinstance(entries, list):
        return _report("batch", Result(ERROR, None, ["$.entries: expected an array"]))
    base = Path(manifest_path).parent if manifest_path != "-" else Path.cwd()

    def one(i_entry):
        i, entry = i_entry
        if not isinstance(entry, dict) or "command" not in entry:
            return _report("?", Result(ERROR, None, [f"$.entries[{i}]: expected {{command, input}}"]))
        inp = entry.get("input")
        if isinstance(inp, str):
            return run_file(entry["command"], str(base / inp) if inp != "-" else inp, opts)
        return run(entry["command"], inp if inp is not None else {}, opts)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        reports = list(pool.map(one, enumerate(entries)))
    statuses = [r["status"] for r in reports]
    status = ERROR if ERROR in statuses else (FAIL if FAIL in statuses else OK)
    counts = {s: statuses.count(s) for s in (OK, FAIL, ERROR)}
    return {
        "command": "batch",
        "status": status,
        "payload": {"entries": reports, "counts": counts},
        "diagnostics": [f"entry {i}: {r['status']}" for i, r in enumerate(reports) if r["status"] != OK],
        "version": __version__,
    }


def render_text(report: dict) -> str:
    lines = [f"{report['command']}: {report['status']}"]

    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k in sorted(obj):
                v = obj[k]
                if isinstance(v, (dict, list)) and v and not _flat(v):
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {_inline(v)}")
        elif isinstance(obj, list):
            for v in obj:
                if isinstance(v, (dict, list)) and not _flat(v):
                    lines.append(f"{pad}-")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}- {_inline(v)}")
        elif obj is not None:
            lines.append(f"{pad}{_inline(obj)}")

    walk(report["payload"], 1)
    for d in report["diagnostics"]:
        lines.append(f"  ! {d}")
    return "\n".join(lines)


def _flat(v) -> bool:
    if isinstance(v, dict):
        return all(not isinstance(x, (dict, list)) for x in v.values())
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in v)


def _inline(v) -> str:
    if isinstance(v, str):
        return v
    return json.dumps(v, sort_keys=True)


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pdt", description="Period-map limit computations on rational quadratic spaces.")
    p.add_argument("--version", action="version", version=f"pdt {__version__}")
    p.add_argument("command", choices=sorted(COMMANDS) + ["batch"], help="operation to run")
    p.add_argument("input", nargs="?", help="JSON input file, or '-' for stdin (manifest for batch)")
    p.add_argument("--text", action="store_true", help="human-readable output instead of JSON")
    p.add_argument("--seed", type=int, default=0, help="seed for witness search (default 0)")
    p.add_argument("--tol", type=float, default=None, help="tolerance override for numeric checks")
    p.add_argument("--height", type=int, default=2, help="height bound for isotropic enumeration")
    p.add_argument("--degree", type=int, default=3, help="extrapolation degree for limit-period")
    p.add_argument("--workers", type=int, default=1, help="parallel entries for batch")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    opts = Options(text=args.text, seed=args.seed, tol=args.tol, height=args.height, degree=args.degree)
    if args.command == "batch":
        if args.input is None:
            report = _report("batch", Result(ERROR, None, ["batch needs a manifest path"]))
        else:
            report = batch(args.input, opts, args.workers)
    else:
        report = run_file(args.command, args.input, opts)
    sys.stdout.write((render_text(report) if opts.text else dumps(report)) + "\n")
    return EXIT[report["status"]]


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
