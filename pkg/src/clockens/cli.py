"""Command-line client for the experiment service.

Each experiment is a subcommand driven by a JSON config file.  The client
validates the config, sends it to the service (in-process by default, or
to a remote server via --server), and writes CSV/JSON outputs at full
precision.  Identical config and seed give byte-identical files.

Exit codes: 0 success, 1 runtime or numerical failure, 2 config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from pydantic import ValidationError

from .service.schemas import EXPERIMENTS, RunConfig, config_schema_text

_FLOAT_FORMAT = ".17g"


def _fmt(value: float) -> str:
    return format(float(value), _FLOAT_FORMAT)


def _fail_config(detail) -> int:
    print(json.dumps({"error": {"type": "ConfigInvalid", "detail": detail}}, sort_keys=True), file=sys.stderr)
    return 2


def _fail_runtime(detail) -> int:
    print(json.dumps({"error": detail}, sort_keys=True), file=sys.stderr)
    return 1


def _validation_detail(exc: ValidationError) -> list[dict]:
    detail = []
    for err in exc.errors(include_url=False, include_context=False, include_input=False):
        pointer = "/" + "/".join(str(part) for part in err["loc"])
        detail.append({"field": pointer, "message": err["msg"]})
    return detail


def _load_config(path: str, experiment: str, args) -> RunConfig:
    raw = json.loads(Path(path).read_text()) if path else {}
    if not isinstance(raw, dict):
        raise ValueError("config root must be a JSON object")
    if "experiment" in raw and raw["experiment"] != experiment:
        raise ValueError(
            f"config file names experiment {raw['experiment']!r} but the "
            f"subcommand is {experiment!r}"
        )
    raw["experiment"] = experiment
    if args.seed is not None:
        raw["seed"] = args.seed
    if args.output is not None:
        raw["output"] = args.output
    if args.format is not None:
        raw["format"] = args.format
    return RunConfig.model_validate(raw)


def _client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        # starlette's TestClient warns about its httpx backend; the in-process
        # transport is exactly what we want for single-shot runs.
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import app

    return TestClient(app)


def _write_csv(path: Path, header: list[str], columns: list[list[float]]) -> None:
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _write_trajectory_csv(path: Path, table: dict) -> None:
    dof = len(table["q"][0])
    header = (
        ["sigma"]
        + [f"q{i}" for i in range(dof)]
        + [f"p{i}" for i in range(dof)]
        + ["t", "pi_t", "H_value"]
    )
    lines = [",".join(header)]
    for i in range(len(table["sigma"])):
        row = (
            [table["sigma"][i]]
            + list(table["q"][i])
            + list(table["p"][i])
            + [table["t"][i], table["pi_t"][i], table["h_value"][i]]
        )
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _sidecar(payload: dict, keep_tables: bool) -> dict:
    if keep_tables:
        return payload
    slim = {k: v for k, v in payload.items() if k not in ("z", "omega", "trajectory")}
    return slim


def _write_outputs(config: RunConfig, payload: dict) -> list[str]:
    written: list[str] = []
    if config.output is None:
        print(json.dumps(payload, indent=2, sort_keys=True))
        return written
    prefix = Path(config.output)
    if prefix.parent != Path("."):
        prefix.parent.mkdir(parents=True, exist_ok=True)
    if config.format == "csv":
        if "z" in payload:
            z = payload["z"]
            path = prefix.with_name(prefix.name + "_z.csv")
            _write_csv(path, ["beta", "z_kernel", "z_direct", "rel_err"],
                       [z["beta"], z["z_kernel"], z["z_direct"], z["rel_err"]])
            written.append(str(path))
        if "omega" in payload:
            om = payload["omega"]
            path = prefix.with_name(prefix.name + "_omega.csv")
            _write_csv(path, ["energy", "omega_kernel", "omega_direct", "abs_err"],
                       [om["energy"], om["omega_kernel"], om["omega_direct"], om["abs_err"]])
            written.append(str(path))
        if "trajectory" in payload:
            path = prefix.with_name(prefix.name + "_trajectory.csv")
            _write_trajectory_csv(path, payload["trajectory"])
            written.append(str(path))
    json_path = prefix.with_name(prefix.name + ".json")
    json_path.write_text(
        json.dumps(_sidecar(payload, config.format == "json"), indent=2, sort_keys=True) + "\n"
    )
    written.append(str(json_path))
    return written


def _run_experiment(args) -> int:
    try:
        config = _load_config(args.config, args.experiment, args)
    except ValidationError as exc:
        return _fail_config(_validation_detail(exc))
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        return _fail_config([{"field": "/", "message": str(exc)}])
    if config.format == "csv" and config.output is None and args.experiment not in (
        "repar-check",
        "projector-xcheck",
    ):
        return _fail_config(
            [{"field": "/output", "message": "csv format needs an --output prefix"}]
        )

    with _client(args.server) as client:
        response = client.post(
            f"/experiments/{args.experiment}", json=config.model_dump(mode="json")
        )
    if response.status_code == 422:
        return _fail_config(response.json().get("detail"))
    if response.status_code != 200:
        try:
            detail = response.json().get("error", response.json())
        except ValueError:
            detail = {"type": "HTTPError", "message": response.text}
        return _fail_runtime(detail)

    payload = response.json()
    written = _write_outputs(config, payload)
    for path in written:
        print(path)
    return 0


def _run_schema(_args) -> int:
    print(config_schema_text())
    return 0


def _run_serve(args) -> int:
    import uvicorn

    uvicorn.run("clockens.service.app:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clockens",
        description="Experiments on ensembles from a constrained clock kernel",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--output", default=None, help="output path prefix")
        p.add_argument("--format", default=None, choices=("csv", "json"))
        p.add_argument("--seed", default=None, type=int)
        p.add_argument("--server", default=None, help="remote service URL (default: in-process)")
        p.set_defaults(func=_run_experiment, experiment=name)
    schema_parser = sub.add_parser("schema", help="print the JSON config schema")
    schema_parser.set_defaults(func=_run_schema)
    serve_parser = sub.add_parser("serve", help="run the HTTP service")
    serve_parser.add_argument("--host", default="127.0.0.1")
    serve_parser.add_argument("--port", default=8000, type=int)
    serve_parser.set_defaults(func=_run_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
