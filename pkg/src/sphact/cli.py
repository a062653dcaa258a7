"""Command-line interface.

Subcommands: ``table``, ``decompose``, ``plot-data``, ``frame-check``,
``verify-theorem``, ``synthetic``.  Every command writes a CSV or JSON
report (9 significant digits, LF line endings) plus a companion PNG figure,
and is byte-for-byte deterministic given its configuration.

Option precedence is flags > config file > defaults; the config file is a
flat ``key=value`` text file using the long option names without dashes.

Exit codes: 0 success, 1 numerical failure, 2 usage or configuration error.
"""

import argparse
import json
import sys
from pathlib import Path

from . import figures
from .activations import CATALOG, get_activation
from .analysis import plot_data, table_report
from .denoise import (SyntheticConfig, instance_activation_name,
                      make_theorem_instance, synthetic_experiment,
                      verify_theorem)
from .errors import ConfigError, NumericalError
from .frames import design_circle, design_registry, tight_frame_residual
from .quadrature import decompose

TABLE_ACTS = ["id", "softplus", "tanh", "sigmoid", "swish", "gelu_paper"]

DEFAULTS = {
    "table": dict(acts=TABLE_ACTS, n=[2, 10], K=10, Q=None, grid=4096,
                  out="table.csv", format="csv"),
    "decompose": dict(acts=TABLE_ACTS, n=[2, 10], K=10, Q=None,
                      out="decompose.csv", format="csv"),
    "plot-data": dict(acts=["id"], n=[2], K=30, Q=None, grid=512,
                      out="plot_data.csv", format="csv"),
    "frame-check": dict(designs=["circle4", "circle8", "circle16", "octahedron",
                                 "icosahedron", "dodecahedron"],
                        out="frame_check.csv", format="csv"),
    "verify-theorem": dict(trials=50, seed=0, K=10, restarts=6,
                           out="verify_theorem.csv", format="csv"),
    "synthetic": dict(acts=["relu", "softplus", "elu"], n=[9], rows=100,
                      trials=10, restarts=5, seed=0,
                      noise_grid=[round(0.1 * i, 10) for i in range(12)],
                      out="synthetic.csv", format="csv"),
}


def _fmt(x) -> str:
    """Floats at 9 significant digits; None prints blank."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x)
    if isinstance(x, float):
        return format(x, ".9g")
    return str(x)


def _json_value(x):
    if isinstance(x, float):
        return float(format(x, ".9g"))
    return x


def write_rows(rows: list[dict], columns: list[str], out: str, fmt: str) -> None:
    path = Path(out)
    if fmt == "csv":
        lines = [",".join(columns)]
        lines += [",".join(_fmt(r[c]) for c in columns) for r in rows]
        path.write_bytes(("\n".join(lines) + "\n").encode())
    else:
        payload = [{c: _json_value(r[c]) for c in columns} for r in rows]
        path.write_bytes((json.dumps(payload, indent=2) + "\n").encode())


def _figure_path(out: str) -> str:
    return str(Path(out).with_suffix(".png"))


def _parse_list(value, conv, what):
    items = [v for v in str(value).replace(",", " ").split() if v]
    try:
        return [conv(v) for v in items]
    except ValueError:
        raise ConfigError(f"could not parse {what}: {value!r}") from None


def _read_config_file(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from None
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _merge_config(command: str, args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS[command])
    file_cfg = _read_config_file(args.config) if getattr(args, "config", None) else {}
    for key, value in file_cfg.items():
        if key not in cfg and key not in ("seed", "trials", "grid", "Q", "K"):
            raise ConfigError(f"unknown config key {key!r} for command {command!r}")
        cfg[key] = value
    for key in cfg:
        flag = getattr(args, key, None)
        if flag is not None:
            cfg[key] = flag
    # normalize list/int/float-typed entries that may arrive as strings
    if "acts" in cfg:
        cfg["acts"] = (_parse_list(cfg["acts"], str, "activations")
                       if isinstance(cfg["acts"], str) else list(cfg["acts"]))
    if "n" in cfg:
        cfg["n"] = (_parse_list(cfg["n"], int, "dimensions")
                    if isinstance(cfg["n"], str) else [int(v) for v in cfg["n"]])
    if "designs" in cfg and isinstance(cfg["designs"], str):
        cfg["designs"] = _parse_list(cfg["designs"], str, "designs")
    if "noise_grid" in cfg and isinstance(cfg["noise_grid"], str):
        cfg["noise_grid"] = _parse_list(cfg["noise_grid"], float, "noise grid")
    for key in ("K", "Q", "grid", "seed", "trials", "restarts", "rows"):
        if key in cfg and cfg[key] is not None and not isinstance(cfg[key], int):
            try:
                cfg[key] = int(cfg[key])
            except ValueError:
                raise ConfigError(f"option {key} must be an integer, got {cfg[key]!r}")
    cfg["figure"] = not getattr(args, "no_figure", False)
    return cfg


def _validate_common(cfg: dict) -> None:
    for name in cfg.get("acts", []):
        if name not in CATALOG:
            raise ConfigError(f"unknown activation {name!r}; known: {', '.join(sorted(CATALOG))}")
    for n in cfg.get("n", []):
        if n < 1:
            raise ConfigError(f"sphere dimension must be >= 1, got n={n}")
    if cfg.get("K") is not None and cfg["K"] < 0:
        raise ConfigError(f"K must be >= 0, got {cfg['K']}")
    if cfg.get("Q") is not None and cfg.get("K") is not None and cfg["Q"] < 2 * cfg["K"] + 8:
        raise ConfigError(f"Q must be >= 2K+8 = {2 * cfg['K'] + 8}, got {cfg['Q']}")
    if cfg.get("format") not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg.get('format')!r}")
    if cfg.get("seed") is not None and cfg["seed"] < 0:
        raise ConfigError(f"seed must be >= 0, got {cfg['seed']}")
    if cfg.get("trials") is not None and cfg["trials"] < 1:
        raise ConfigError(f"trials must be >= 1, got {cfg['trials']}")
    for lev in cfg.get("noise_grid", []):
        if lev < 0:
            raise ConfigError(f"noise levels must be >= 0, got {lev}")


def cmd_table(cfg: dict) -> None:
    rows = []
    for r in table_report(cfg["acts"], cfg["n"], K=cfg["K"], Q=cfg["Q"]):
        if r.T_certified is None:
            print(f"warning: no certified bound for non-C^4 activation "
                  f"{r.activation!r}", file=sys.stderr)
        rows.append(dict(activation=r.activation, n=r.n, K=r.K,
                         T_empirical=r.T_empirical, T_certified=r.T_certified,
                         g_at_1=r.g_at_1, ratio=r.ratio))
    cols = ["activation", "n", "K", "T_empirical", "T_certified", "g_at_1", "ratio"]
    write_rows(rows, cols, cfg["out"], cfg["format"])
    if cfg["figure"]:
        figures.render_table(rows, _figure_path(cfg["out"]))


def cmd_decompose(cfg: dict) -> None:
    rows = []
    for name in cfg["acts"]:
        act = get_activation(name)
        for n in cfg["n"]:
            dec = decompose(act, n, cfg["K"], Q=cfg["Q"])
            for k in range(cfg["K"] + 1):
                rows.append(dict(activation=name, n=n, K=cfg["K"], k=k,
                                 a_k=float(dec.coeffs[k]), residual=dec.residual))
    cols = ["activation", "n", "K", "k", "a_k", "residual"]
    write_rows(rows, cols, cfg["out"], cfg["format"])
    if cfg["figure"]:
        figures.render_decompose(rows, _figure_path(cfg["out"]))


def cmd_plot_data(cfg: dict) -> None:
    if len(cfg["acts"]) != 1 or len(cfg["n"]) != 1:
        raise ConfigError("plot-data takes exactly one activation and one dimension")
    act = get_activation(cfg["acts"][0])
    pd = plot_data(act, cfg["n"][0], K=cfg["K"], grid_size=cfg["grid"])
    rows = [dict(t=float(pd.t[i]), theta=float(pd.theta[i]),
                 approx=float(pd.approx[i]), g=float(pd.g[i]),
                 gprime=float(pd.gprime[i]))
            for i in range(pd.t.size)]
    write_rows(rows, ["t", "theta", "approx", "g", "gprime"], cfg["out"], cfg["format"])
    if cfg["figure"]:
        figures.render_plot_data(rows, _figure_path(cfg["out"]),
                                 activation=pd.activation, n=pd.n)


def _design_by_name(name: str):
    if name.startswith("circle"):
        try:
            return design_circle(int(name[len("circle"):]))
        except ValueError:
            raise ConfigError(f"bad circle design name {name!r}; use e.g. circle8")
    try:
        return design_registry(name)
    except KeyError as exc:
        raise ConfigError(str(exc))


def cmd_frame_check(cfg: dict) -> None:
    rows = []
    for name in cfg["designs"]:
        design = _design_by_name(name)
        for k in range(design.exactness_degree // 2 + 1):
            chk = tight_frame_residual(design, k)
            rows.append(dict(design=name, k=k, residual=chk.residual,
                             frame_constant=chk.frame_constant,
                             rank=chk.rank, **{"pass": bool(chk.tight)}))
    cols = ["design", "k", "residual", "frame_constant", "rank", "pass"]
    write_rows(rows, cols, cfg["out"], cfg["format"])
    if cfg["figure"]:
        figures.render_frame_check(rows, _figure_path(cfg["out"]))


def cmd_verify_theorem(cfg: dict) -> None:
    rows = []
    for idx in range(cfg["trials"]):
        obj = make_theorem_instance(idx, seed=cfg["seed"], K=cfg["K"])
        rep = verify_theorem(obj, restarts=cfg["restarts"], seed=cfg["seed"] + idx)
        rows.append(dict(instance=idx,
                         activation=instance_activation_name(idx), n=obj.dec.n,
                         T=rep.T, eps_bound=rep.eps_bound,
                         eps_exact_sup=rep.eps_exact_sup,
                         guaranteed_corr=rep.guaranteed_correlation,
                         min_found_corr=rep.min_correlation,
                         **{"pass": bool(rep.satisfied)}))
    cols = ["instance", "activation", "n", "T", "eps_bound", "eps_exact_sup",
            "guaranteed_corr", "min_found_corr", "pass"]
    write_rows(rows, cols, cfg["out"], cfg["format"])
    if cfg["figure"]:
        figures.render_verify_theorem(rows, _figure_path(cfg["out"]))


def cmd_synthetic(cfg: dict) -> None:
    if len(cfg["n"]) != 1:
        raise ConfigError("synthetic takes exactly one latent dimension")
    config = SyntheticConfig(acts=tuple(cfg["acts"]), n=cfg["n"][0],
                             rows=cfg["rows"], trials=cfg["trials"],
                             restarts=cfg["restarts"],
                             noise_levels=tuple(cfg["noise_grid"]),
                             seed=cfg["seed"])
    rows = [dict(activation=r.activation, noise_level=r.noise_level,
                 mean_dist=r.mean_dist, std_dist=r.std_dist,
                 mean_corr=r.mean_corr, std_corr=r.std_corr)
            for r in synthetic_experiment(config)]
    cols = ["activation", "noise_level", "mean_dist", "std_dist",
            "mean_corr", "std_corr"]
    write_rows(rows, cols, cfg["out"], cfg["format"])
    if cfg["figure"]:
        figures.render_synthetic(rows, _figure_path(cfg["out"]))


COMMANDS = {
    "table": cmd_table,
    "decompose": cmd_decompose,
    "plot-data": cmd_plot_data,
    "frame-check": cmd_frame_check,
    "verify-theorem": cmd_verify_theorem,
    "synthetic": cmd_synthetic,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphact",
        description="Zonal harmonic analysis of activation functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--acts", help="comma-separated activation names")
        p.add_argument("--n", help="comma-separated sphere dimensions")
        p.add_argument("--K", type=int, help="truncation degree")
        p.add_argument("--Q", type=int, help="quadrature node count (>= 2K+8)")
        p.add_argument("--grid", type=int, help="evaluation grid size")
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--trials", type=int, help="trial / instance count")
        p.add_argument("--restarts", type=int, help="optimizer restarts")
        p.add_argument("--rows", type=int, help="finite layer row count")
        p.add_argument("--designs", help="comma-separated design names")
        p.add_argument("--noise-grid", dest="noise_grid",
                       help="comma-separated relative noise levels")
        p.add_argument("--out", help="output file path")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--no-figure", action="store_true",
                       help="skip the companion PNG figure")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _merge_config(args.command, args)
        _validate_common(cfg)
        COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
