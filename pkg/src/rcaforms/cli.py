"""Command line client. Requests go to the in-process app unless --url names a running server."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

EXIT_VERDICT = 1
EXIT_REQUEST = 2


class Client:
    def __init__(self, url: str | None = None):
        self.url = url.rstrip("/") if url else None
        self._local = None

    def post(self, path: str, payload: dict) -> dict:
        if self.url:
            import httpx
            resp = httpx.post(self.url + path, json=payload, timeout=None)
        else:
            if self._local is None:
                import warnings
                with warnings.catch_warnings():
                    # starlette's test client nags about httpx; in-process use is intended
                    warnings.simplefilter("ignore")
                    from fastapi.testclient import TestClient
                from .api import app
                self._local = TestClient(app)
            resp = self._local.post(path, json=payload)
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("detail", resp.text)
            except ValueError:
                detail = resp.text
            raise RequestFailed(f"{path}: HTTP {resp.status_code}: {detail}")
        return resp.json()


class RequestFailed(RuntimeError):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj, out: str | None) -> None:
    _emit(json.dumps(obj, indent=2) + "\n", out)


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _flat(m) -> list:
    """Row-major entries of a serialized matrix; complex matrices give re then im blocks."""
    if isinstance(m, dict):
        return [v for row in m["re"] for v in row] + [v for row in m["im"] for v in row]
    return [v for row in m for v in row]


# subcommands --------------------------------------------------------------------

def cmd_group(cl: Client, a) -> int:
    res = cl.post("/group", {"type": a.type})
    if a.json:
        _dump(res, a.out)
    else:
        lines = [f"{res['label']}: rank {res['rank']}, order {res['order']}, degrees {res['degrees']}",
                 f"reflections: {len(res['roots'])} in {len(res['reflection_classes'])} class(es)"]
        _emit("\n".join(lines) + "\n", a.out)
    return 0


def cmd_irreps(cl: Client, a) -> int:
    res = cl.post("/irreps", {"type": a.type})
    if a.json:
        _dump(res, a.out)
        return 0
    n = len(res["irreps"][0]["class_character"])
    rows = [[r["name"], r["dim"], *r["class_character"]] for r in res["irreps"]]
    _emit(_csv(rows, ["name", "dim"] + [f"chi_class{k}" for k in range(n)]), a.out)
    return 0


def cmd_dunkl(cl: Client, a) -> int:
    payload = {"type": a.type, "irrep": a.irrep, "c": a.c, "deg": a.deg}
    if a.y:
        payload["y"] = a.y.split(",")
    _dump(cl.post("/dunkl", payload), a.out)
    return 0


def cmd_gram(cl: Client, a) -> int:
    res = cl.post("/gram", {"type": a.type, "irrep": a.irrep, "c": a.c, "maxdeg": a.maxdeg,
                            "float_mode": a.float, "matrices": not a.no_matrices, "radical": a.radical})
    _dump(res, a.out)
    return 0


def cmd_sch(cl: Client, a) -> int:
    res = cl.post("/sch", {"type": a.type, "irrep": a.irrep, "c": a.c, "maxdeg": a.maxdeg,
                           "target": a.target, "fit": a.fit, "window": a.window, "float_mode": a.float})
    if a.json:
        _dump(res, a.out)
        return 0
    text = _csv([[n, s, d] for n, (s, d) in enumerate(zip(res["s"], res["dims"]))], ["n", "s_n", "dim_n"])
    if a.fit:
        for key, fit in res.get("fit", {}).items():
            if "numerator" in fit:
                text += f"# {key}: (1-t)^-{fit['r']} * p(t), p coefficients {fit['numerator']}\n"
            else:
                text += f"# {key}: fit failed: {fit['error']}\n"
        text += f"# a={res['a']} method={res['a_method']} error={res['a_error']}\n"
    _emit(text, a.out)
    return 0


def cmd_jantzen(cl: Client, a) -> int:
    res = cl.post("/jantzen", {"type": a.type, "irrep": a.irrep, "c0": a.c0, "c1": a.c1,
                               "maxdeg": a.maxdeg, "s": a.s})
    _dump(res, a.out)
    return 0 if res["wall_crossing"]["ok"] and res["submodule"]["closed"] else EXIT_VERDICT


def cmd_monodromy(cl: Client, a) -> int:
    _dump(cl.post("/monodromy", {"type": a.type, "irrep": a.irrep, "c": a.c, "tol": a.tol}), a.out)
    return 0


def cmd_weight(cl: Client, a) -> int:
    res = cl.post("/weight", {"type": a.type, "irrep": a.irrep, "c": a.c, "grid": a.grid,
                              "seed": a.seed, "normalize": not a.raw})
    if a.json:
        _dump(res, a.out)
        return 0
    smp = res["samples"]
    rank = len(smp[0]["x"]) if smp else 0
    nK = len(_flat(smp[0]["K"])) if smp else 0
    header = [f"x{i + 1}" for i in range(rank)] + [f"K{k}" for k in range(nK)] + ["accuracy"]
    if smp and "closed_form" in smp[0]:
        header.append("closed_form")
    rows = [s["x"] + _flat(s["K"]) + [s["accuracy"]] + ([s["closed_form"]] if "closed_form" in s else [])
            for s in smp]
    _emit(_csv(rows, header), a.out)
    return 0


def cmd_quadrature(cl: Client, a) -> int:
    _dump(cl.post("/quadrature", {"type": a.type, "irrep": a.irrep, "c": a.c, "maxdeg": a.maxdeg,
                                  "shift": a.shift}), a.out)
    return 0


THM51_CSV = ["group", "irrep", "c", "a", "a_method", "a_error", "full_support", "dim_kz_L", "p", "q",
             "kz_ratio", "abs_match", "abs_deviation", "signed_ratio", "signed_match"]


def _signature_failed(rep: dict) -> bool:
    return rep.get("status") == "error" or rep.get("abs_match") is False


def cmd_signature_formula(cl: Client, a) -> int:
    rep = cl.post("/verify/signature-formula", {"type": a.type, "irrep": a.irrep, "c": a.c, "maxdeg": a.maxdeg,
                                    "window": a.window, "float_mode": a.float, "signed": not a.unsigned})
    _dump(rep, a.out)
    if a.csv:
        _emit(_csv([[rep.get(k) for k in THM51_CSV]], THM51_CSV), a.csv)
    return EXIT_VERDICT if _signature_failed(rep) else 0


def cmd_definiteness(cl: Client, a) -> int:
    payload = {"type": a.type, "c": a.c, "maxdeg": a.maxdeg}
    if a.irreps:
        payload["irreps"] = a.irreps.split(",")
    rep = cl.post("/verify/definiteness", payload)
    _dump(rep, a.out)
    if a.csv:
        keys = list(rep["rows"][0]) if rep["rows"] else []
        _emit(_csv([[r[k] for k in keys] for r in rep["rows"]], keys), a.csv)
    return 0 if rep["ok"] else EXIT_VERDICT


def cmd_sweep(cl: Client, a) -> int:
    from .verify import load_config
    reports = cl.post("/sweep", {"config": load_config(a.config)})["reports"]
    _dump(reports, a.out)
    if a.csv:
        _emit(_csv([[r.get(k) for k in THM51_CSV + ["status"]] for r in reports], THM51_CSV + ["status"]), a.csv)
    return EXIT_VERDICT if any(_signature_failed(r) for r in reports) else 0


def cmd_serve(_: Client, a) -> int:
    import uvicorn
    uvicorn.run("rcaforms.api:app", host=a.host, port=a.port)
    return 0


# parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rcaforms", description=__doc__)
    p.add_argument("--url", help="base URL of a running rcaforms server (default: in-process)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *, irrep=False, c=False, out=True, help=None):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--type", required=True, help="Coxeter type, e.g. A2, B2, I2_5")
        if irrep:
            sp.add_argument("--irrep", required=True)
        if c:
            sp.add_argument("--c", required=True, help="comma separated, one value per reflection class")
        if out:
            sp.add_argument("--out", help="write to this file instead of stdout")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("group", cmd_group, help="roots, classes and degrees")
    sp.add_argument("--json", action="store_true")
    sp = add("irreps", cmd_irreps, help="irreducible representations with characters (CSV)")
    sp.add_argument("--json", action="store_true")
    sp = add("dunkl", cmd_dunkl, irrep=True, c=True, help="Dunkl operator matrices on one degree")
    sp.add_argument("--deg", type=int, required=True)
    sp.add_argument("--y", help="direction, comma separated (default: all coordinate directions)")
    sp = add("gram", cmd_gram, irrep=True, c=True, help="contravariant form Grams per degree")
    sp.add_argument("--maxdeg", type=int, required=True)
    sp.add_argument("--float", action="store_true", help="floating-point arithmetic")
    sp.add_argument("--no-matrices", action="store_true")
    sp.add_argument("--radical", action="store_true")
    sp = add("sch", cmd_sch, irrep=True, c=True, help="signature character (CSV)")
    sp.add_argument("--maxdeg", type=int, required=True)
    sp.add_argument("--target", choices=["L", "Delta"], default="L")
    sp.add_argument("--fit", action="store_true", help="rational fit and asymptotic signature")
    sp.add_argument("--window", type=int, default=10)
    sp.add_argument("--float", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp = add("jantzen", cmd_jantzen, irrep=True, help="Jantzen filtration and wall-crossing report")
    sp.add_argument("--c0", required=True)
    sp.add_argument("--c1", required=True)
    sp.add_argument("--maxdeg", type=int, required=True)
    sp.add_argument("--s", type=float, default=0.1)
    sp = add("monodromy", cmd_monodromy, irrep=True, c=True, help="braid generators, Hecke residuals, invariant form")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp = add("weight", cmd_weight, irrep=True, c=True, help="weight function samples (CSV)")
    sp.add_argument("--grid", default="chamber:16")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--raw", action="store_true", help="skip the Gaussian normalization")
    sp.add_argument("--json", action="store_true")
    sp = add("quadrature", cmd_quadrature, irrep=True, c=True, help="integral pairing versus the Gaussian Gram")
    sp.add_argument("--maxdeg", type=int, default=2)
    sp.add_argument("--shift", default="auto")
    sp = add("verify-thm51", cmd_signature_formula, irrep=True, c=True, help="asymptotic signature versus the Hecke-side form")
    sp.add_argument("--maxdeg", type=int, default=40)
    sp.add_argument("--window", type=int, default=10)
    sp.add_argument("--float", action="store_true")
    sp.add_argument("--unsigned", action="store_true", help="skip the signed verdict")
    sp.add_argument("--csv")
    sp = add("verify-c415", cmd_definiteness, c=True, help="nondegeneracy of the induced forms, per irrep")
    sp.add_argument("--maxdeg", type=int, default=24)
    sp.add_argument("--irreps")
    sp.add_argument("--csv")

    sp = sub.add_parser("sweep", help="batch comparisons from a TOML config")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out")
    sp.add_argument("--csv")
    sp.set_defaults(fn=cmd_sweep)

    sp = sub.add_parser("serve", help="run the HTTP service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    sp.set_defaults(fn=cmd_serve)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(Client(args.url), args)
    except RequestFailed as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_REQUEST


if __name__ == "__main__":
    sys.exit(main())
