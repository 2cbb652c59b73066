"""Command line front end: ``maslov-witt run`` and ``maslov-witt props``."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, field as dc_field

from .exactcore import DomainError, Field, Matrix
from .maslov import LagrangianPath, kashiwara_form, maslov_triple, path_report, sylvester_matrix
from .props import FAMILIES, run_family
from .sturm import SturmWord, decompose, evaluate, f_mn, mu_cocycle, phi, phi_closed_forms, sylvester_of_sturm
from .symplectic import (
    Lagrangian,
    generator_h,
    generator_lower,
    generator_m,
    generator_upper,
    is_symplectic,
)
from .witt import SymmetricForm, isometry_record, regularize, signed_discriminant, witt_class

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    """Malformed scenario; carries a JSON-pointer-like location."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


@dataclass
class Scenario:
    field: Field
    g: int
    objects: dict = dc_field(default_factory=dict)
    tasks: list = dc_field(default_factory=list)


COMMANDS = ("witt", "sylvester", "maslov", "cocycle", "phi", "decompose", "props")


def _parse_field(raw, where: str) -> Field:
    if isinstance(raw, str):
        raw = {"kind": "Q"} if raw.strip() in ("Q", "QQ") else {"kind": "Fp", "p": raw.strip()[3:-1]} if raw.strip().startswith("GF(") else {"kind": raw}
    if not isinstance(raw, dict):
        raise InputError(where, "field must be an object like {\"kind\": \"Fp\", \"p\": 5}")
    kind = raw.get("kind")
    try:
        if kind == "Q":
            return Field.Q()
        if kind in ("Fp", "GF"):
            p = raw.get("p")
            try:
                p = int(p)
            except (TypeError, ValueError):
                raise InputError(where, f"modulus {p!r} is not an integer")
            return Field.GF(p)
    except DomainError as exc:
        raise InputError(where, str(exc))
    raise InputError(where, f"unknown field kind {kind!r}")


def _matrix(F: Field, rows, where: str, shape=None) -> Matrix:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InputError(where, "expected a non-empty array of rows")
    try:
        M = Matrix(F, rows)
    except (DomainError, ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(where, str(exc))
    if shape is not None and M.shape != shape:
        raise InputError(where, f"expected shape {shape}, got {M.shape}")
    return M


_GENERATORS = {"upper": generator_upper, "lower": generator_lower, "h": generator_h, "m": generator_m}


def _parse_object(F: Field, g: int, name: str, raw, objects: dict):
    where = f"objects.{name}"
    if not isinstance(raw, dict) or "type" not in raw:
        raise InputError(where, "object needs a \"type\"")
    kind = raw["type"]
    try:
        if kind == "lagrangian":
            if raw.get("basis") in ("L", "L*"):
                return Lagrangian.L(F, g) if raw["basis"] == "L" else Lagrangian.Lstar(F, g)
            return Lagrangian(_matrix(F, raw.get("basis"), where + ".basis", (2 * g, g)))
        if kind == "symplectic":
            if "generator" in raw:
                gen = _GENERATORS.get(raw["generator"])
                if gen is None:
                    raise InputError(where, f"unknown generator {raw['generator']!r}")
                return gen(_matrix(F, raw.get("arg"), where + ".arg", (g, g)))
            M = _matrix(F, raw.get("matrix"), where + ".matrix", (2 * g, 2 * g))
            if not is_symplectic(M):
                raise InputError(where, "matrix is not symplectic")
            return M
        if kind == "form":
            return SymmetricForm(_matrix(F, raw.get("gram"), where + ".gram"))
        if kind == "word":
            letters = raw.get("letters")
            if not isinstance(letters, list) or not letters:
                raise InputError(where, "a word needs a non-empty \"letters\" array")
            mats = tuple(_matrix(F, q, f"{where}.letters[{i}]", (g, g)) for i, q in enumerate(letters))
            return SturmWord(F, g, int(raw.get("start_parity", 0)) % 2, mats)
        if kind == "path":
            nodes = raw.get("nodes")
            if not isinstance(nodes, list):
                raise InputError(where, "a path needs a \"nodes\" array of names")
            resolved = []
            for i, n in enumerate(nodes):
                obj = objects.get(n)
                if not isinstance(obj, Lagrangian):
                    raise InputError(f"{where}.nodes[{i}]", f"{n!r} is not a previously defined Lagrangian")
                resolved.append(obj)
            return LagrangianPath(resolved)
    except DomainError as exc:
        raise InputError(where, str(exc))
    raise InputError(where, f"unknown object type {kind!r}")


def parse_scenario(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno} column {exc.colno}", f"malformed JSON: {exc.msg}")
    if not isinstance(data, dict):
        raise InputError("$", "scenario must be a JSON object")
    F = _parse_field(data.get("field"), "field")
    g = data.get("g")
    if not isinstance(g, int) or isinstance(g, bool) or g < 1:
        raise InputError("g", "genus must be a positive integer")
    objects: dict = {}
    raw = data.get("objects", {})
    if not isinstance(raw, dict):
        raise InputError("objects", "must be an object")
    for name, raw in raw.items():
        objects[name] = _parse_object(F, g, name, raw, objects)
    tasks = data.get("tasks", [])
    if not isinstance(tasks, list):
        raise InputError("tasks", "must be an array")
    for i, t in enumerate(tasks):
        where = f"tasks[{i}]"
        if not isinstance(t, dict) or t.get("command") not in COMMANDS:
            raise InputError(where, f"command must be one of {', '.join(COMMANDS)}")
        if t["command"] == "props":
            fam = t.get("family", "all")
            if fam != "all" and fam not in FAMILIES:
                raise InputError(where, f"unknown property family {fam!r}")
            continue
        args = t.get("args", [])
        if not isinstance(args, list):
            raise InputError(where, "args must be an array of object names")
        for j, a in enumerate(args):
            if a not in objects:
                raise InputError(f"{where}.args[{j}]", f"dangling name {a!r}")
    return Scenario(F, g, objects, tasks)


# -- tasks ----------------------------------------------------------------------

def _expect(objs, types, command):
    if len(objs) != len(types) or not all(isinstance(o, t) for o, t in zip(objs, types)):
        names = ", ".join(t.__name__ for t in types)
        raise DomainError(f"{command} expects arguments ({names})")


def _form_report(q: SymmetricForm) -> dict:
    reg, rad = regularize(q)
    out = {"support_dim": q.support_dim, "radical_dim": rad, "witt_class": witt_class(q).to_json()}
    out["signed_disc"] = str(signed_discriminant(reg)) if reg.support_dim else "1"
    return out


def _run_task(sc: Scenario, task: dict, seed: int, index: int) -> dict:
    cmd = task["command"]
    objs = [sc.objects[a] for a in task.get("args", [])]
    if cmd == "witt":
        _expect(objs, [SymmetricForm], cmd)
        return _form_report(objs[0])
    if cmd == "sylvester":
        if len(objs) == 1 and isinstance(objs[0], LagrangianPath):
            return path_report(objs[0])
        if len(objs) == 1 and isinstance(objs[0], SturmWord):
            w = objs[0]
            S = sylvester_of_sturm(w)
            return {
                "sylvester": S.to_json(),
                "maslov": witt_class(S).to_json(),
                "evaluation": evaluate(w).to_list(),
                "f": {f"f{m}{n}": f_mn(w, m, n).to_json() for m in (0, 1) for n in (0, 1)},
            }
        raise DomainError("sylvester expects one path or one word")
    if cmd == "maslov":
        _expect(objs, [Lagrangian] * 3, cmd)
        mu = maslov_triple(*objs)
        return {
            "mu_BL": mu.to_json(),
            "two_mu_BL": (mu + mu).to_json(),
            "kashiwara_form_class": witt_class(kashiwara_form(*objs)).to_json(),
        }
    if cmd == "cocycle":
        _expect(objs, [Matrix, Matrix], cmd)
        return {"mu": mu_cocycle(*objs).to_json()}
    if cmd == "phi":
        _expect(objs, [Matrix], cmd)
        closed = phi_closed_forms(objs[0])
        return {"phi": phi(objs[0]).to_json(), "closed_form": closed.to_json()}
    if cmd == "decompose":
        _expect(objs, [Matrix], cmd)
        w = decompose(objs[0])
        return {"word": w.to_json(), "verified": evaluate(w) == objs[0]}
    if cmd == "props":
        fam = task.get("family", "all")
        cases = int(task.get("cases", 20))
        s = int(task.get("seed", seed))
        names = sorted(FAMILIES) if fam == "all" else [fam]
        return {"families": [run_family(n, cases, s) for n in names]}
    raise DomainError(f"unknown command {cmd!r}")


def run(sc: Scenario, seed: int) -> dict:
    results = []
    for i, task in enumerate(sc.tasks):
        entry = {"index": i, "command": task["command"], "args": list(task.get("args", []))}
        try:
            res = _run_task(sc, task, seed, i)
            failed = task["command"] == "props" and any(f["failures"] for f in res["families"])
            entry.update(status="fail" if failed else "ok", result=res)
        except (DomainError, ArithmeticError, LookupError) as exc:
            entry.update(status="error", error=f"{type(exc).__name__}: {exc}")
        results.append(entry)
    return {"seed": seed, "field": repr(sc.field), "g": sc.g, "tasks": results}


def exit_code(report: dict) -> int:
    if report.get("input_error"):
        return EXIT_INPUT
    if any(t.get("status") != "ok" for t in report.get("tasks", [])):
        return EXIT_FAIL
    if any(f["failures"] for f in report.get("families", [])):
        return EXIT_FAIL
    return EXIT_OK


def _dump(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _seed(arg) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("MASLOV_WITT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            pass
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="maslov-witt", description="Exact Witt classes and Maslov indices over Q and GF(p).")
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run the tasks of a scenario file")
    r.add_argument("scenario")
    r.add_argument("--seed", type=int)
    r.add_argument("--out")
    p = sub.add_parser("props", help="run seeded property families")
    p.add_argument("family", help="family name or 'all'")
    p.add_argument("--cases", type=int, default=20)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    sub.add_parser("families", help="list property families")
    args = ap.parse_args(argv)

    if args.cmd == "families":
        print("\n".join(sorted(FAMILIES)))
        return EXIT_OK
    seed = _seed(args.seed)
    if args.cmd == "run":
        try:
            with open(args.scenario, encoding="utf-8") as fh:
                sc = parse_scenario(fh.read())
        except (OSError, UnicodeDecodeError) as exc:
            report = {"input_error": str(exc)}
        except InputError as exc:
            report = {"input_error": str(exc)}
        else:
            report = run(sc, seed)
    else:
        if args.family != "all" and args.family not in FAMILIES:
            report = {"input_error": f"unknown property family {args.family!r}"}
        else:
            names = sorted(FAMILIES) if args.family == "all" else [args.family]
            report = {"seed": seed, "families": [run_family(n, args.cases, seed) for n in names]}
    text = _dump(report)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
