"""Command-line driver.

Two subcommands share the data/model flags:

* ``analyze``   full Shapley decomposition, text table on stdout, JSON via
  ``--out``, per-subset statistics via ``--cache-out``.
* ``rootogram`` hanging-rootogram data of the full model as JSON.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
error.  Messages go to stderr.  A ``--config`` file supplies flat
``key = value`` defaults; explicit flags win.
"""

import argparse
import csv
import sys
from dataclasses import dataclass

from . import __version__, api
from .exceptions import ConfigError, DataError, GlmShapleyError, NumericalError
from .report import render_document

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


@dataclass
class RunConfig:
    """Resolved configuration of one CLI invocation."""

    command: str
    data: str
    response: str
    players: list
    family: str = None
    measures: list = None
    null: str = "ml"
    hurdle: bool = False
    mc_samples: int = None
    seed: int = 0
    workers: int = None
    out: str = None
    cache_out: str = None
    delimiter: str = ","
    jmax: int = None

    def echo(self):
        d = dict(self.__dict__)
        d["players"] = format_players_spec(self.players)
        return d


def parse_players_spec(spec):
    """Parse "a,b,grp=c+d" into [(name, [columns]), ...]."""
    if not spec or not spec.strip():
        raise ConfigError("players spec is empty")
    players = []
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" in item:
            name, _, cols = item.partition("=")
            name = name.strip()
            columns = [c.strip() for c in cols.split("+") if c.strip()]
            if not name or not columns:
                raise ConfigError(f"cannot parse player spec item '{item}'")
            players.append((name, columns))
        else:
            players.append((item, [item]))
    if not players:
        raise ConfigError("players spec is empty")
    return players


def format_players_spec(players):
    items = []
    for name, cols in players:
        if len(cols) == 1 and cols[0] == name:
            items.append(name)
        else:
            items.append(f"{name}={'+'.join(cols)}")
    return ",".join(items)


def read_config_file(path):
    """Flat key=value file; '#' starts a comment."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


_CONFIG_KEYS = {
    "data": str,
    "response": str,
    "players": str,
    "family": str,
    "measure": str,
    "null": str,
    "hurdle": lambda v: v.lower() in ("1", "true", "yes"),
    "mc_samples": int,
    "seed": int,
    "workers": int,
    "out": str,
    "cache_out": str,
    "delimiter": str,
    "jmax": int,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="glmshapley",
        description="Shapley-value decomposition of model fit over regressor subsets",
    )
    parser.add_argument("--version", action="version", version=f"glmshapley {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--data", help="input CSV path (header row required)")
        p.add_argument("--response", help="response column name")
        p.add_argument("--players", help="player spec, e.g. 'age,gender,grp=a+b'")
        p.add_argument("--family",
                       choices=["gaussian", "logit", "poisson", "zt-poisson", "geometric"],
                       help="response family (omit with --hurdle)")
        p.add_argument("--hurdle", action="store_true", default=None,
                       help="two-part hurdle analysis (logit + zero-truncated poisson)")
        p.add_argument("--delimiter", help="CSV delimiter (default ',')")
        p.add_argument("--workers", type=int, help="parallel fit workers (1 = serial)")
        p.add_argument("--seed", type=int, help="sampling seed (default 0)")
        p.add_argument("--config", help="flat key=value config file; flags override")
        p.add_argument("--out", help="write JSON document here")

    pa = sub.add_parser("analyze", help="Shapley decomposition over all subsets")
    add_common(pa)
    pa.add_argument("--measure", help="comma-separated measures "
                    "(kl-r2, mcfadden-r2, loglik, shifted-loglik)")
    pa.add_argument("--null", choices=["ml", "plugin"],
                    help="null-model convention (plugin: zt-poisson only)")
    pa.add_argument("--mc-samples", type=int, dest="mc_samples",
                    help="Monte Carlo permutation samples (default: exact)")
    pa.add_argument("--cache-out", dest="cache_out",
                    help="write per-subset statistics CSV here")

    pr = sub.add_parser("rootogram", help="hanging rootogram of the full model")
    add_common(pr)
    pr.add_argument("--jmax", type=int, help="extend count bins beyond max observed")
    return parser


def resolve_config(args):
    """Merge defaults, config file and flags into a RunConfig."""
    file_values = {}
    if args.config:
        try:
            raw = read_config_file(args.config)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}")
        for key, value in raw.items():
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"unknown config key '{key}'")
            file_values[key] = _CONFIG_KEYS[key](value)

    def pick(name, default=None):
        flag = getattr(args, name, None)
        if flag is not None:
            return flag
        if name in file_values:
            return file_values[name]
        return default

    data = pick("data")
    response = pick("response")
    players_spec = pick("players")
    if data is None:
        raise ConfigError("--data is required")
    if response is None:
        raise ConfigError("--response is required")
    if players_spec is None:
        raise ConfigError("--players is required")

    hurdle = bool(pick("hurdle", False))
    family = pick("family")
    if hurdle and family:
        raise ConfigError("--hurdle and --family are mutually exclusive")
    if not hurdle and not family:
        raise ConfigError("either --family or --hurdle is required")

    measures = pick("measure", "kl-r2")
    measure_list = [m.strip() for m in measures.split(",") if m.strip()]
    if not measure_list:
        raise ConfigError("measure list is empty")

    mc_samples = pick("mc_samples")
    if mc_samples is not None and mc_samples < 1:
        raise ConfigError("--mc-samples must be >= 1")

    return RunConfig(
        command=args.command,
        data=data,
        response=response,
        players=parse_players_spec(players_spec),
        family=family,
        measures=measure_list,
        null=pick("null", "ml"),
        hurdle=hurdle,
        mc_samples=mc_samples,
        seed=pick("seed", 0),
        workers=pick("workers"),
        out=pick("out"),
        cache_out=pick("cache_out"),
        delimiter=pick("delimiter", ","),
        jmax=pick("jmax"),
    )


def write_cache_csv(path, doc, cfg):
    """Per-subset statistics: mask, player names, loglik, deviance, measures."""
    parts = []
    if doc.kind == "single":
        parts.append(("", doc.part))
    else:
        parts.append(("binary", doc.binary))
        parts.append(("count", doc.count))
    kinds = cfg.measures
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["part", "mask", "players", "loglik", "deviance"] + list(kinds)
        writer.writerow(header)
        for label, part in parts:
            if part.subsets is None:
                continue
            for row in part.subsets:
                writer.writerow(
                    [label, row["mask"], "+".join(row["players"]),
                     repr(row["loglik"]), repr(row["deviance"])]
                    + [repr(row[k]) for k in kinds]
                )


def run_analyze(cfg):
    include_cache = cfg.cache_out is not None
    if include_cache and cfg.mc_samples is not None:
        raise ConfigError("--cache-out requires an exact run")
    common = dict(
        data=cfg.data,
        response=cfg.response,
        players=cfg.players,
        measures=cfg.measures,
        null=cfg.null,
        mc_samples=cfg.mc_samples,
        seed=cfg.seed,
        workers=cfg.workers,
        delimiter=cfg.delimiter,
        include_cache=include_cache,
        config_echo=cfg.echo(),
    )
    if cfg.hurdle:
        doc = api.analyze_hurdle(**common)
    else:
        doc = api.analyze(family=cfg.family, **common)
    print(render_document(doc))
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(doc.to_json())
            fh.write("\n")
    if cfg.cache_out:
        write_cache_csv(cfg.cache_out, doc, cfg)
    return 0


def run_rootogram(cfg):
    root = api.rootogram(
        data=cfg.data,
        response=cfg.response,
        players=cfg.players,
        family=cfg.family,
        hurdle=cfg.hurdle,
        j_max=cfg.jmax,
        delimiter=cfg.delimiter,
    )
    lines = [f"{'count':>6}{'observed':>10}{'expected':>12}"]
    for j, obs, exp in zip(root.counts, root.observed, root.expected):
        lines.append(f"{j:>6}{obs:>10}{exp:>12.2f}")
    print("\n".join(lines))
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(root.to_json())
            fh.write("\n")
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        if cfg.command == "analyze":
            return run_analyze(cfg)
        return run_rootogram(cfg)
    except ConfigError as exc:
        print(f"glmshapley: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, FileNotFoundError) as exc:
        print(f"glmshapley: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"glmshapley: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except GlmShapleyError as exc:
        print(f"glmshapley: error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
