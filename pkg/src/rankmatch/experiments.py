"""Experiment commands as pure functions of their parameters.

Each command maps a parameter dict to a JSON-ready result payload.  A report
is ``{"manifest": ..., "result": ...}``; replaying the manifest's command and
parameters must reproduce the result payload byte for byte, whatever the
worker count.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .blossom import maximum_matching
from .bounds import kwis_expected_upper_bound, lemma22_lower_bound, theorem_threshold
from .graph import (
    Graph,
    Matching,
    parse_graph,
    parse_matching,
    serialize_graph,
    serialize_matching,
    validate_matching,
)
from .instances import gen_gadget_chain, gen_random_planted, gen_replicated
from .ranking import exhaustive_stats, monte_carlo_sizes, sample_ranking
from .wis import MonteCarlo, ProbabilityEstimate, kwis_count_upper_bound, kwis_probability, wis_sweep


def frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


@dataclass(frozen=True)
class Instance:
    graph: Graph
    opt: Matching
    provenance: str
    source: dict[str, Any]


def load_instance(params: dict[str, Any]) -> Instance:
    path = Path(params["graph"])
    text = path.read_text()
    g = parse_graph(text)
    source: dict[str, Any] = {"path": str(path), "sha256": sha256_text(text)}
    if params.get("opt"):
        opt_text = Path(params["opt"]).read_text()
        opt = parse_matching(opt_text, g)
        source["opt_path"] = params["opt"]
        source["opt_sha256"] = sha256_text(opt_text)
        if len(opt) != len(maximum_matching(g)):
            raise ValueError("the supplied OPT is not a maximum matching")
        return Instance(g, opt, "planted", source)
    return Instance(g, maximum_matching(g), "blossom", source)


@dataclass(frozen=True)
class RatioEstimate:
    samples: int
    mean_ratio: float
    ci95: tuple[float, float]
    mu: int
    size_histogram: dict[int, int]

    @classmethod
    def from_histogram(cls, hist: dict[int, int], mu: int) -> RatioEstimate:
        samples = sum(hist.values())
        if mu == 0:
            return cls(samples, 1.0, (1.0, 1.0), 0, hist)
        total = sum(s * c for s, c in hist.items())
        mean = Fraction(total, samples * mu)
        if samples > 1:
            sq = sum(c * Fraction(s, mu) ** 2 for s, c in hist.items())
            var = (sq - samples * mean * mean) / (samples - 1)
            half = 1.959963984540054 * math.sqrt(var / samples)
        else:
            half = 0.0
        m = float(mean)
        return cls(samples, m, (m - half, m + half), mu, hist)

    def to_json(self) -> dict[str, Any]:
        return {
            "samples": self.samples,
            "mean_ratio": self.mean_ratio,
            "ci95": list(self.ci95),
            "mu": self.mu,
            "size_histogram": {str(k): v for k, v in self.size_histogram.items()},
        }


# -- commands ---------------------------------------------------------------


def cmd_run(params: dict[str, Any], threads: int) -> tuple[dict[str, Any], dict[str, Any]]:
    inst = load_instance(params)
    rec = sample_ranking(inst.graph, params["seed"])
    check = validate_matching(inst.graph, rec.matching)
    result = {
        "n": inst.graph.n,
        "m": inst.graph.m,
        "permutation": list(rec.permutation.order),
        "matching": [list(e) for e in rec.matching.sorted_edges()],
        "size": rec.matched_count,
        "mu": len(inst.opt),
        "valid": check.valid,
        "maximal": check.maximal,
    }
    return result, _meta(inst)


def cmd_estimate(params: dict[str, Any], threads: int) -> tuple[dict[str, Any], dict[str, Any]]:
    inst = load_instance(params)
    hist = monte_carlo_sizes(inst.graph, params["samples"], params["seed"], params["algorithm"], threads)
    est = RatioEstimate.from_histogram(hist, len(inst.opt))
    return {"algorithm": params["algorithm"], **est.to_json()}, _meta(inst)


def cmd_exhaustive(params: dict[str, Any], threads: int) -> tuple[dict[str, Any], dict[str, Any]]:
    inst = load_instance(params)
    g = inst.graph
    ks = params.get("k") or []
    stats = exhaustive_stats(g, inst.opt, ks, cap=params["cap"], threads=threads)
    ratio = stats.expected_ratio
    per_k = []
    for k, value in stats.expected_kwis.items():
        row: dict[str, Any] = {"k": k, "expected_kwis": frac(value)}
        if g.n % 2 == 0 and 2 * k <= g.n // 2:
            bound = kwis_expected_upper_bound(g.n, k)
            row["upper_bound"] = frac(bound)
            row["upper_bound_holds"] = value <= bound
        per_k.append(row)
    result: dict[str, Any] = {
        "n": g.n,
        "mu": stats.mu,
        "n_factorial": str(stats.n_factorial),
        "size_histogram": {str(s): c for s, c in stats.size_histogram.items()},
        "sum_sizes": str(stats.sum_sizes),
        "aug3_histogram": {str(a): c for a, c in stats.aug3_histogram.items()},
        "sum_aug3": str(stats.sum_aug3),
        "expected_size": frac(stats.expected_size),
        "expected_ratio": frac(ratio) if ratio is not None else None,
        "kwis": per_k,
    }
    if params.get("c") is not None:
        c = Fraction(params["c"])
        chain = lemma22_lower_bound(g.n, c, stats.aug3_histogram, ratio)
        result["counting_chain"] = {
            "c": frac(c),
            "k": chain.k,
            "s": str(chain.s),
            "s_bound": frac(chain.s_bound),
            "chain_expectation": frac(chain.chain_expectation),
            "expected_kwis": frac(chain.expected_kwis),
            "chain_holds": chain.chain_holds,
            "obligation": chain.obligation,
            "certified": chain.certified,
        }
    return result, _meta(inst)


def cmd_verify_claim(params: dict[str, Any], threads: int) -> tuple[dict[str, Any], dict[str, Any]]:
    inst = load_instance(params)
    g, opt = inst.graph, inst.opt
    members = sorted(set(params["set"]))
    k = len(members) // 2
    bound = Fraction(1, 4**k)
    result: dict[str, Any] = {"set": members, "k": k, "bound": frac(bound)}
    if params.get("samples"):
        est = kwis_probability(g, opt, members, MonteCarlo(params["samples"], params["seed"]))
        assert isinstance(est, ProbabilityEstimate)
        result["mode"] = "montecarlo"
        result["probability"] = {"hits": est.hits, "samples": est.samples, "estimate": est.estimate,
                                 "ci95": list(est.ci95)}
        return result, _meta(inst)
    prob = kwis_probability(g, opt, members, cap=params["cap"], threads=threads)
    assert isinstance(prob, Fraction)
    sweep = wis_sweep(g, opt, cap=params["cap"], threads=threads)
    t = sweep.tally
    distinct = {}
    if g.n % 2 == 0:
        for kk in range(1, g.n // 4 + 1):
            found = len(sweep.distinct_kwis(kk))
            limit = kwis_count_upper_bound(g.n, kk)
            distinct[str(kk)] = {"found": found, "upper_bound": str(limit), "holds": found <= limit}
    result.update(
        mode="exhaustive",
        probability=frac(prob),
        probability_holds=prob <= bound,
        permutations=str(sweep.n_factorial),
        certificates=t.certificates,
        counterpart_violations=t.counterpart_violations,
        aug3_bound_violations=t.aug3_bound_violations,
        cross_check_failures=t.cross_check_failures,
        distinct_kwis=distinct,
    )
    return result, _meta(inst)


def cmd_bounds(params: dict[str, Any], threads: int) -> tuple[dict[str, Any], dict[str, Any]]:
    rep = theorem_threshold(Fraction(params["c"]), params["precision"])
    result = {
        "c": frac(rep.c),
        "precision_bits": rep.precision_bits,
        "f_of_c": rep.f_of_c,
        "f_interval": list(rep.f_interval),
        "verdict": rep.verdict,
        "root_bracket": list(rep.root_bracket),
        "root_width": rep.root_width,
    }
    return result, {"graph_source": None, "opt_provenance": None}


def parse_gen_spec(spec: str) -> tuple[str, dict[str, str]]:
    kind, _, rest = spec.partition(":")
    args: dict[str, str] = {}
    for i, part in enumerate(filter(None, rest.split(","))):
        key, eq, value = part.partition("=")
        if eq:
            args[key.strip()] = value.strip()
        else:
            args[str(i)] = key.strip()
    return kind, args


def cmd_gen(params: dict[str, Any], threads: int) -> tuple[dict[str, Any], dict[str, Any]]:
    kind, args = parse_gen_spec(params["spec"])
    source: dict[str, Any] = {"generator": params["spec"]}
    if kind == "gadget-chain":
        g, opt = gen_gadget_chain(int(args.get("copies", args.get("0", "1"))))
    elif kind == "replicate":
        inst = load_instance(params)
        b = int(args.get("b", args.get("0", "1")))
        g, opt = gen_replicated(inst.graph, inst.opt, b)
        source.update(inst.source)
    elif kind == "random-planted":
        n = int(args.get("n", args.get("0", "10")))
        p = float(args.get("p", args.get("1", "0.3")))
        g, opt = gen_random_planted(n, p, params["seed"])
    else:
        raise ValueError(f"unknown generator {kind!r}; use gadget-chain, replicate or random-planted")
    gtext, otext = serialize_graph(g), serialize_matching(opt)
    result: dict[str, Any] = {
        "n": g.n,
        "m": g.m,
        "opt_size": len(opt),
        "graph_sha256": sha256_text(gtext),
        "opt_sha256": sha256_text(otext),
    }
    out = params.get("out")
    if out:
        gpath, opath = Path(out), Path(str(out) + ".opt")
        gpath.write_text(gtext)
        opath.write_text(otext)
        result["graph_file"] = str(gpath)
        result["opt_file"] = str(opath)
    else:
        result["graph"] = gtext
        result["opt"] = otext
    return result, {"graph_source": source, "opt_provenance": "planted"}


def _meta(inst: Instance) -> dict[str, Any]:
    return {"graph_source": inst.source, "opt_provenance": inst.provenance}


COMMANDS: dict[str, Callable[[dict[str, Any], int], tuple[dict[str, Any], dict[str, Any]]]] = {
    "run": cmd_run,
    "estimate": cmd_estimate,
    "exhaustive": cmd_exhaustive,
    "verify-claim": cmd_verify_claim,
    "bounds": cmd_bounds,
    "gen": cmd_gen,
}


def execute(command: str, params: dict[str, Any], threads: int = 1) -> dict[str, Any]:
    """Run ``command`` and wrap its payload with a manifest."""
    result, meta = COMMANDS[command](params, threads)
    manifest = {
        "command": command,
        "parameters": params,
        "seed": params.get("seed"),
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        **meta,
    }
    return {"manifest": manifest, "result": result}


def replay(report: dict[str, Any], threads: int = 1) -> tuple[dict[str, Any], bool]:
    """Re-execute a report's manifest; the flag says whether the payload matched exactly."""
    manifest = report["manifest"]
    fresh = execute(manifest["command"], manifest["parameters"], threads)
    return fresh, canonical_json(fresh["result"]) == canonical_json(report["result"])


def histogram_csv(result: dict[str, Any]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["histogram", "key", "count"])
    for name in ("size_histogram", "aug3_histogram"):
        for key, count in result.get(name, {}).items():
            writer.writerow([name.removesuffix("_histogram"), key, count])
    return buf.getvalue()

