"""Command-line interface.

Subcommands: ``fixture`` (synthetic demo data), ``cluster`` (stops +
coverage row at one radius), ``sweep`` (coverage table over radii),
``route`` (ant-colony tour over given stops), ``plan`` (end to end), and
``oracle`` (exact tour for small instances). Exit codes: 0 success,
1 usage error, 2 data error.
"""

import argparse
import sys

from . import io as tio
from .clustering import mean_shift
from .coverage import coverage_report, report_csv_text
from .datasets import DEFAULT_FIXTURE_SEED, make_house_blobs
from .exceptions import InstanceTooLarge, TransitPlanError
from .pipeline import DEFAULT_BANDWIDTHS_M, bandwidth_sweep, plan
from .routing import (
    DEFAULT_ALPHA,
    DEFAULT_BETA,
    DEFAULT_N_ANTS,
    DEFAULT_N_ITERATIONS,
    DEFAULT_RHO,
    aco_solve,
    brute_force_tsp,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage problems by default; this CLI reserves 2
    # for data errors, so usage failures are rerouted to exit 1.
    def error(self, message):
        raise _UsageError(message)


def _bandwidth_list(text):
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number list: {text!r}") from None
    if not values or any(v <= 0 for v in values):
        raise argparse.ArgumentTypeError("bandwidths must be positive numbers")
    return values


def _add_aco_flags(sub):
    sub.add_argument("--alpha", type=float, default=DEFAULT_ALPHA,
                     help="pheromone exponent (default %(default)s)")
    sub.add_argument("--beta", type=float, default=DEFAULT_BETA,
                     help="visibility exponent (default %(default)s)")
    sub.add_argument("--rho", type=float, default=DEFAULT_RHO,
                     help="evaporation rate in (0,1) (default %(default)s)")
    sub.add_argument("--ants", type=int, default=DEFAULT_N_ANTS,
                     help="ants per iteration (default %(default)s)")
    sub.add_argument("--iters", type=int, default=DEFAULT_N_ITERATIONS,
                     help="iterations (default %(default)s)")
    sub.add_argument("--seed", type=int, default=None,
                     help="RNG seed; required for reproducible output")


def _aco_options(args):
    return {
        "alpha": args.alpha,
        "beta": args.beta,
        "rho": args.rho,
        "n_ants": args.ants,
        "n_iterations": args.iters,
        "seed": args.seed,
    }


def build_parser():
    parser = _Parser(prog="transitplan",
                     description="Plan bus stops and a closed bus route "
                                 "from house coordinates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fixture", help="generate a synthetic house dataset")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.add_argument("--houses", type=int, default=8000, dest="n_houses")
    p.add_argument("--blobs", type=int, default=20)
    p.add_argument("--span-km", type=float, default=6.0)
    p.add_argument("--seed", type=int, default=DEFAULT_FIXTURE_SEED)
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser("cluster", help="estimate stops at one service radius")
    p.add_argument("houses", help="house file (CSV 'lat,lon' or GeoJSON)")
    p.add_argument("--bandwidth", type=float, default=500.0,
                   help="service radius in meters (default %(default)s)")
    p.add_argument("--report", help="coverage-row CSV path (default: stdout)")
    p.add_argument("--out", help="stops GeoJSON path")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("sweep", help="coverage table over several radii")
    p.add_argument("houses")
    p.add_argument("--bandwidths", type=_bandwidth_list,
                   default=list(DEFAULT_BANDWIDTHS_M),
                   help="comma-separated radii in meters "
                        "(default 500,450,400,350,300,250)")
    p.add_argument("--report", help="CSV output path (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("route", help="ant-colony tour over given stops")
    p.add_argument("stops", help="stop file (CSV 'lat,lon' or GeoJSON)")
    _add_aco_flags(p)
    p.add_argument("--out", help="tour GeoJSON path (default: stdout)")
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("plan", help="sweep, pick the radius, route the stops")
    p.add_argument("houses")
    p.add_argument("--bandwidths", type=_bandwidth_list,
                   default=list(DEFAULT_BANDWIDTHS_M))
    p.add_argument("--existing", help="existing-stop overlay file")
    _add_aco_flags(p)
    p.add_argument("--report", help="sweep CSV path (default: stdout)")
    p.add_argument("--out", help="tour GeoJSON path")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("oracle", help="exact shortest tour (max 11 stops)")
    p.add_argument("stops")
    p.add_argument("--out", help="tour GeoJSON path (default: stdout)")
    p.set_defaults(func=cmd_oracle)

    return parser


def _emit(text, path):
    if path:
        tio._atomic_write_text(path, text)
    else:
        sys.stdout.write(text)


def cmd_fixture(args):
    houses = make_house_blobs(n_houses=args.n_houses, n_blobs=args.blobs,
                              span_km=args.span_km, seed=args.seed)
    _emit(tio.houses_csv_text(houses), args.out)
    return EXIT_OK


def cmd_cluster(args):
    dataset = tio.load_houses(args.houses)
    result = mean_shift(dataset.houses, args.bandwidth)
    row = coverage_report(dataset.houses, result.centers, args.bandwidth,
                          stops_spawned=result.n_centers)
    _emit(report_csv_text([row]), args.report)
    if args.out:
        tio.write_geojson(args.out, tio.stops_geojson(result.centers))
    return EXIT_OK


def cmd_sweep(args):
    dataset = tio.load_houses(args.houses)
    report = bandwidth_sweep(dataset.houses, args.bandwidths)
    _emit(report_csv_text(report.rows), args.report)
    print(f"chosen bandwidth: {report.chosen_bandwidth_m:g} m", file=sys.stderr)
    return EXIT_OK


def cmd_route(args):
    stops = tio.load_points(args.stops)
    tour, _ = aco_solve(stops, **_aco_options(args))
    collection = tio.tour_geojson(stops, tour.order, length_m=tour.length_m)
    _emit(tio.geojson_text(collection), args.out)
    print(f"tour over {len(stops)} stops: {tour.length_m:.1f} m",
          file=sys.stderr)
    return EXIT_OK


def cmd_plan(args):
    dataset = tio.load_houses(args.houses, existing_stops_path=args.existing)
    result = plan(dataset.houses, args.bandwidths,
                  existing_stops=dataset.existing_stops,
                  aco_options=_aco_options(args))
    _emit(report_csv_text(result.sweep.rows), args.report)
    if args.out:
        tio.export_geojson(result, args.out)
    print(f"chosen bandwidth: {result.bandwidth_m:g} m; "
          f"tour over {len(result.centers)} stops: "
          f"{result.tour.length_m:.1f} m", file=sys.stderr)
    return EXIT_OK


def cmd_oracle(args):
    stops = tio.load_points(args.stops)
    tour = brute_force_tsp(stops)
    collection = tio.tour_geojson(stops, tour.order, length_m=tour.length_m)
    _emit(tio.geojson_text(collection), args.out)
    print(f"optimal tour over {len(stops)} stops: {tour.length_m:.1f} m",
          file=sys.stderr)
    return EXIT_OK


def cli_main(argv=None):
    """Run the CLI; returns the exit code instead of raising SystemExit."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version paths
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InstanceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TransitPlanError, FileNotFoundError, IsADirectoryError,
            PermissionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        # Parameter validation (bad flag values) rather than bad data.
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(cli_main(sys.argv[1:]))
