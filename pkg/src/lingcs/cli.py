"""Command line front end: scenario-driven check suites with text or JSON reports."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Dict, List, Optional

from .report import Report
from .scenarios import BUILTIN, Scenario, ScenarioError, load_scenario


def _need(rep: Report, suite: str, **things) -> bool:
    missing = [name for name, val in things.items() if val is None or val is False]
    if missing:
        rep.skip(f"{suite}.applicable", "scenario provides the required data", f"scenario has no {', '.join(missing)}")
        return False
    return True


def _precondition(rep: Report, suite: str, pre: Report) -> bool:
    if pre.ok:
        return True
    ids = ", ".join(c.check_id for c in pre.failures)
    rep.add(f"{suite}.precondition", "required structure is present", False, f"failing prerequisites: {ids}")
    return False


# --------------------------------------------------------------------------
# suites
# --------------------------------------------------------------------------

def suite_courant(sc: Scenario, seed: int) -> Report:
    from .gentan import GenTan, courant_axiom_suite

    rep = Report("courant-axioms")
    if sc.dorfman is not None:
        S = GenTan(sc.dorfman, drop_curvature=sc.drop_curvature)
        rep.extend(courant_axiom_suite(S, seed, 1))
    if sc.lie2 is not None and "lie2.r" in sc.ints:
        rep.extend(courant_axiom_suite(sc.lie2.S, seed, 1), prefix="lie2.")
    if not rep.records:
        _need(rep, "courant", dorfman_connection=None)
    return rep


def suite_dorfman(sc: Scenario, seed: int) -> Report:
    from .dorfman import dorfman_identity_check

    rep = Report("dorfman-identities")
    if _need(rep, "dorfman", dorfman_connection=sc.dorfman):
        rep.extend(dorfman_identity_check(sc.dorfman, seed, 1))
    return rep


def suite_gacs(sc: Scenario, seed: int) -> Report:
    from .gcs import gacs_check

    rep = Report("gacs")
    if _need(rep, "gacs", gcs=sc.gcs):
        rep.extend(gacs_check(sc.gcs))
    return rep


def suite_integrability(sc: Scenario, seed: int) -> Report:
    from .gcs import is_integrable

    rep = Report("integrability")
    if _need(rep, "integrable", gcs=sc.gcs):
        rep.extend(is_integrable(sc.gcs))
    return rep


def suite_abracket(sc: Scenario, seed: int) -> Report:
    from .gcs import gacs_check, leibniz_A_check, symplectic_bracket_check

    rep = Report("abracket")
    if not _need(rep, "A", gcs=sc.gcs) or not _precondition(rep, "A", gacs_check(sc.gcs)):
        return rep
    # the complex Lie algebroid axioms characterise integrability, so they are always run
    rep.extend(leibniz_A_check(sc.gcs, seed, 1, integrable=True))
    if sc.tau_inv is not None:
        rep.run("A.symplectic-identification", "𝔸 = ½[·,·]_ℂ under the τ-identification",
                lambda: symplectic_bracket_check(sc.gcs, sc.tau_inv, seed))
    return rep


def suite_quasi_real(sc: Scenario, seed: int) -> Report:
    from .gcs import QuasiRealError, adapt_dorfman, adapted, bracket_A, gacs_check, quasi_real_roundtrip, same_action

    rep = Report("quasi-real")
    if not _need(rep, "quasi-real", gcs=sc.gcs) or not _precondition(rep, "quasi-real", gacs_check(sc.gcs)):
        return rep
    A = bracket_A(sc.gcs)
    try:
        G2 = quasi_real_roundtrip(sc.gcs.j, adapt_dorfman(sc.gcs), A.anchor)
    except QuasiRealError as e:
        rep.add("quasi-real.realises", "the adapted dull bracket realises 𝔸", False, str(e))
        return rep
    rep.add("quasi-real.realises", "the adapted dull bracket realises 𝔸", True)
    rep.run("quasi-real.roundtrip", "rebuilt 𝒥 acts as the original on generators", lambda: same_action(adapted(sc.gcs), G2))
    return rep


def suite_eigen(sc: Scenario, seed: int) -> Report:
    from .gcs import complex_type_blocks_check, eigen_check, gacs_check

    rep = Report("eigen")
    if not _need(rep, "eigen", gcs=sc.gcs) or not _precondition(rep, "eigen", gacs_check(sc.gcs)):
        return rep
    rep.extend(eigen_check(sc.gcs, seed, integrable=True))
    if sc.cpx is not None:
        L = sc.cpx
        rep.run("eigen.complex-type-blocks", "U₊ frame splits into T¹⁰M and the annihilator of E¹⁰",
                lambda: complex_type_blocks_check(sc.gcs, L.J_M, L.j_E))
    return rep


def suite_kahler(sc: Scenario, seed: int) -> Report:
    from .gcs import kahler_check

    rep = Report("kahler")
    if _need(rep, "kahler", gcs=sc.gcs, kahler_partner=sc.kahler_partner):
        rep.extend(kahler_check(sc.gcs, sc.kahler_partner))
    return rep


def suite_holomorphic(sc: Scenario, seed: int) -> Report:
    from .holomorphic import d01_split, holo_section_check, jE_integrability_check, jE_integrable

    rep = Report("holomorphic")
    if not _need(rep, "holo", complex_type=sc.cpx):
        return rep
    L = sc.cpx
    rep.extend(jE_integrability_check(L))
    if not jE_integrable(L):
        rep.skip("holo.sections", "holomorphic sections", "j_E is not integrable")
        return rep
    S, r = d01_split(L, seed=seed)
    rep.extend(r)
    for t, (e, expect) in enumerate(sc.holo_sections, 1):
        got = holo_section_check(L, e, S=S)
        rep.add(f"holo.section[{t}]", "D^{0,1}e = 0 decides holomorphic sections", got == expect,
                f"section {[str(x) for x in e]} holomorphic = {got}, expected {expect}")
    return rep


def _algebroid_dorfman(rep: Report, sc: Scenario, suite: str) -> bool:
    from .dorfman import is_skew

    if not _need(rep, suite, algebroid=sc.algebroid, dorfman_connection=sc.dorfman):
        return False
    if sc.k != sc.algebroid.n:
        rep.skip(f"{suite}.applicable", "Dorfman connection on A⊕T*M", "rank of E differs from the rank of A")
        return False
    if not is_skew(sc.dorfman):
        rep.skip(f"{suite}.applicable", "skew Dorfman connection on A⊕T*M", "Dorfman connection is not skew")
        return False
    return True


def suite_2rep(sc: Scenario, seed: int) -> Report:
    from .algebroid import basic_data, la_axiom_check, tta_algebroid_check, two_rep_check

    rep = Report("algebroid-2rep")
    if not _need(rep, "2rep", algebroid=sc.algebroid):
        return rep
    A = sc.algebroid
    rep.extend(la_axiom_check(A, seed))
    if _algebroid_dorfman(rep, sc, "2rep"):
        rep.extend(two_rep_check(basic_data(A, sc.dorfman), seed))
        rep.extend(tta_algebroid_check(A, sc.dorfman, seed))
    return rep


def _glanon_gcs(rep: Report, sc: Scenario, suite: str) -> bool:
    if not _need(rep, suite, algebroid=sc.algebroid, gcs=sc.gcs):
        return False
    if sc.k != sc.algebroid.n:
        rep.skip(f"{suite}.applicable", "linear GCS on TA⊕T*A", "rank of E differs from the rank of A")
        return False
    return True


def suite_glanon(sc: Scenario, seed: int) -> Report:
    from .algebroid import glanon_check, jc_deg_gcs_check, kpm_restriction

    rep = Report("glanon")
    if not _glanon_gcs(rep, sc, "glanon"):
        return rep
    g = glanon_check(sc.algebroid, sc.gcs)
    rep.extend(g)
    if g.ok:
        rep.extend(jc_deg_gcs_check(sc.algebroid, sc.gcs, seed))
        rep.extend(kpm_restriction(sc.algebroid, sc.gcs))
    return rep


def suite_deg(sc: Scenario, seed: int) -> Report:
    from .algebroid import deg_axiom_check, deg_bracket_via_dorfman_check

    rep = Report("deg-courant")
    if not _need(rep, "deg", algebroid=sc.algebroid):
        return rep
    rep.extend(deg_axiom_check(sc.algebroid, seed))
    if _algebroid_dorfman(rep, sc, "deg"):
        rep.extend(deg_bracket_via_dorfman_check(sc.algebroid, sc.dorfman, seed))
    return rep


def suite_cpm(sc: Scenario, seed: int) -> Report:
    from .algebroid import cpm_check, glanon_check, jpm_check

    rep = Report("cpm")
    if not _glanon_gcs(rep, sc, "cpm") or not _precondition(rep, "cpm", glanon_check(sc.algebroid, sc.gcs)):
        return rep
    for sign in (1, -1):
        rep.extend(cpm_check(sc.algebroid, sc.gcs, sign, seed))
        rep.extend(jpm_check(sc.algebroid, sc.gcs, sign))
    return rep


def suite_drinfeld(sc: Scenario, seed: int) -> Report:
    from .algebroid import f_iso_check, glanon_check, matched_pair_check

    rep = Report("drinfeld")
    if not _glanon_gcs(rep, sc, "drinfeld") or not _precondition(rep, "drinfeld", glanon_check(sc.algebroid, sc.gcs)):
        return rep
    for sign in (1, -1):
        rep.extend(f_iso_check(sc.algebroid, sc.gcs, sign, seed))
        rep.extend(matched_pair_check(sc.algebroid, sc.gcs, sign, seed))
    return rep


def suite_lie2(sc: Scenario, seed: int) -> Report:
    from .lie2 import lagrangian_adapt, lie2_gacs_check, lie2_gcs_check, split_lie2_check

    rep = Report("lie2")
    if not _need(rep, "lie2", lie2_data=sc.lie2):
        return rep
    G = sc.lie2
    rep.extend(split_lie2_check(G.S, seed, generators=False))
    g = lie2_gacs_check(G)
    rep.extend(g)
    if not g.ok:
        return rep
    G2 = lagrangian_adapt(G)
    rep.add("lie2.adapt-phi-zero", "Φ vanishes in the adapted Lagrangian splitting", G2.phi_is_zero(), "Φ₂ ≠ 0")
    rep.add("lie2.adapt-idempotent", "adapting twice changes nothing", lagrangian_adapt(G2) is G2, "second adaptation moved")
    rep.extend(lie2_gcs_check(G2, seed))
    return rep


SUITES: Dict[str, Callable[[Scenario, int], Report]] = {
    "courant-axioms": suite_courant,
    "dorfman-identities": suite_dorfman,
    "gacs": suite_gacs,
    "integrability": suite_integrability,
    "abracket": suite_abracket,
    "quasi-real": suite_quasi_real,
    "eigen": suite_eigen,
    "kahler": suite_kahler,
    "holomorphic": suite_holomorphic,
    "algebroid-2rep": suite_2rep,
    "glanon": suite_glanon,
    "deg-courant": suite_deg,
    "cpm": suite_cpm,
    "drinfeld": suite_drinfeld,
    "lie2": suite_lie2,
}
SUITE_NAMES = list(SUITES) + ["all"]


def run_suite(sc: Scenario, suite: str, seed: int = 0) -> Report:
    if suite not in SUITE_NAMES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITE_NAMES)}")
    names = list(SUITES) if suite == "all" else [suite]
    rep = Report(suite)
    for name in names:
        try:
            rep.extend(SUITES[name](sc, seed))
        except (ValueError, ArithmeticError) as e:
            # a structural failure inside a suite is reported, not raised
            rep.add(f"{name}.error", "suite ran to completion", False, f"{type(e).__name__}: {e}")
    return rep


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

_MARK = {"pass": "PASS", "fail": "FAIL", "skipped": "SKIP"}


def _summary(rep: Report) -> Dict[str, int]:
    out = {"pass": 0, "fail": 0, "skipped": 0}
    for r in rep.records:
        out[r.status] += 1
    return out


def emit_report(rep: Report, fmt: str = "text", header: Optional[Dict[str, object]] = None, timings: bool = False) -> bytes:
    header = dict(header or {})
    if fmt == "json":
        lines = [json.dumps({**header, "summary": _summary(rep)}, ensure_ascii=False)]
        for r in rep.records:
            lines.append(json.dumps({
                "check_id": r.check_id,
                "paper_anchor": r.paper_anchor,
                "status": r.status,
                "witness": r.witness,
                "wall_time": round(r.wall_time, 6) if timings else 0.0,
            }, ensure_ascii=False))
        return ("\n".join(lines) + "\n").encode("utf-8")
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    head = "  ".join(f"{k}: {v}" for k, v in header.items())
    lines = [head] if head else []
    for r in rep.records:
        line = f"{_MARK[r.status]}  {r.check_id}  ({r.paper_anchor})"
        if timings:
            line += f"  [{r.wall_time:.3f}s]"
        lines.append(line)
        if r.witness and r.status != "pass":
            lines.append(f"      {'witness' if r.status == 'fail' else 'reason'}: {r.witness}")
    s = _summary(rep)
    lines.append(f"{s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped")
    return ("\n".join(lines) + "\n").encode("utf-8")


def main(argv: Optional[List[str]] = None) -> int:
    ap = argparse.ArgumentParser(prog="lingcs", description="Exact checks for linear generalised complex structures.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    ck = sub.add_parser("check", help="run a check suite on a scenario")
    ck.add_argument("--scenario", required=True, help="scenario file or builtin:NAME")
    ck.add_argument("--suite", required=True, help="suite name (see list-suites)")
    ck.add_argument("--seed", type=int, default=None, help="seed for randomized property data")
    ck.add_argument("--format", choices=("text", "json"), default="text")
    ck.add_argument("--timings", action="store_true", help="include wall times (makes output non-deterministic)")
    sub.add_parser("list-scenarios", help="list built-in scenarios")
    sub.add_parser("list-suites", help="list suite names")
    args = ap.parse_args(argv)

    out = sys.stdout
    if args.cmd == "list-scenarios":
        for name, text in BUILTIN.items():
            desc = next((l.split("=", 1)[1].strip() for l in text.splitlines() if l.startswith("description")), "")
            out.write(f"{name:16s} {desc}\n")
        return 0
    if args.cmd == "list-suites":
        for name in SUITE_NAMES:
            out.write(name + "\n")
        return 0

    if args.suite not in SUITE_NAMES:
        sys.stderr.write(f"error: unknown suite {args.suite!r}; choose from {', '.join(SUITE_NAMES)}\n")
        return 2
    try:
        sc = load_scenario(args.scenario)
    except ScenarioError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    seed = args.seed if args.seed is not None else (sc.seed or 0)
    rep = run_suite(sc, args.suite, seed)
    header = {"scenario": sc.name, "suite": args.suite, "seed": seed}
    sys.stdout.buffer.write(emit_report(rep, args.format, header, args.timings))
    sys.stdout.flush()
    return 0 if rep.ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
