"""Seeded experiment suites behind ``qxent run``.

Every runner takes a validated config dict and returns an
:class:`ExperimentResult`: named checks plus CSV tables.  Per-instance work
is done by module-level functions so it can be farmed out to worker
processes; results are always merged in instance order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import matcore as mc
from . import qae, spinboson as sb, thermo
from .channels import QaeSpec, qae_channel, random_channel, random_unitary_mixture, unitary_channel
from .otm import MeasuredEnsemble, jarzynski_report, random_ensemble, sigma_from_transitions, transition_probabilities

DEFAULT_TOLERANCES = {
    "identity": 1e-9,
    "bound_slack": 1e-9,
    "unital": 1e-9,
    "energy": 1e-6,
    "guessed_identity": 1e-8,
    "training_cost": 1e-3,
    "plateau": 1e-6,
}


@dataclass
class Check:
    """``kind`` is ``max_abs`` (pass if value <= tol) or ``min_slack`` (pass if value >= -tol)."""

    value: float
    tolerance: float
    kind: str = "max_abs"

    @property
    def residual(self) -> float:
        return self.value if self.kind == "max_abs" else max(-self.value, 0.0)

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        if self.kind == "max_abs":
            return self.value <= self.tolerance
        return self.value >= -self.tolerance

    def as_dict(self) -> dict:
        return {"value": self.value, "residual": self.residual, "tolerance": self.tolerance,
                "kind": self.kind, "pass": self.passed}


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)


@dataclass
class ExperimentResult:
    checks: dict[str, Check] = field(default_factory=dict)
    tables: dict[str, Table] = field(default_factory=dict)
    summary: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def merge(self, other: "ExperimentResult", prefix: str) -> None:
        for k, v in other.checks.items():
            self.checks[f"{prefix}.{k}"] = v
        for k, v in other.tables.items():
            self.tables[f"{prefix}_{k}"] = v
        self.summary[prefix] = other.summary


def _map(fn, items, workers: int):
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _tol(cfg: dict) -> dict:
    return {**DEFAULT_TOLERANCES, **cfg.get("tolerances", {})}


# --------------------------------------------------------------------------
# config schemas

_COMMON = {
    "experiment": {"type": "string"},
    "seeds": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
    "tolerances": {
        "type": "object",
        "properties": {k: {"type": "number", "exclusiveMinimum": 0} for k in DEFAULT_TOLERANCES},
        "additionalProperties": False,
    },
    "output_dir": {"type": "string"},
    "workers": {"type": "integer", "minimum": 1},
}

_INT = {"type": "integer", "minimum": 1}
_POS = {"type": "number", "exclusiveMinimum": 0}
_MODES = {
    "type": "array", "minItems": 1,
    "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 3},
}
_TAU_GRID = {
    "type": "object",
    "properties": {"start": {"type": "number", "minimum": 0}, "stop": {"type": "number", "minimum": 0},
                   "num": {"type": "integer", "minimum": 1}},
    "required": ["start", "stop", "num"],
    "additionalProperties": False,
}

_SPECIFIC = {
    "verify-jarzynski": {
        "trials": _INT, "d_min": {"type": "integer", "minimum": 1}, "d_max": _INT,
        "max_kraus": _INT, "unital_trials": {"type": "integer", "minimum": 0},
        "transition_trials": {"type": "integer", "minimum": 0},
    },
    "qae": {
        "d_a": {"type": "integer", "minimum": 2}, "d_b": {"type": "integer", "minimum": 2}, "layers": _INT,
        "rank": _INT, "random_specs": {"type": "integer", "minimum": 0},
        "two_path_specs": {"type": "integer", "minimum": 0},
        "disturbance_specs": {"type": "integer", "minimum": 0},
        "max_evals": _INT, "method": {"enum": ["fourier", "coordinate", "fdgrad"]},
        "plateau_evals": _INT,
    },
    "spin-boson": {
        "omega0": {"type": "number"}, "modes": _MODES, "beta": _POS, "tau": {"type": "number", "minimum": 0},
        "tau_grid": _TAU_GRID, "cutoff_start": {"type": "integer", "minimum": 2},
        "cutoff_max": {"type": "integer", "minimum": 2},
        "ensemble_probs": {"type": "array", "items": _POS, "minItems": 2, "maxItems": 2},
        "random_draws": {"type": "integer", "minimum": 0}, "random_cutoff": {"type": "integer", "minimum": 2},
    },
    "guessed-heat": {
        "omega0": {"type": "number"}, "mode_omega": _POS, "coupling": {"type": "number"},
        "cutoff": {"type": "integer", "minimum": 2}, "beta": _POS, "tau": {"type": "number", "minimum": 0},
        "instances": {"type": "integer", "minimum": 0},
    },
    "random-suite": {
        "trials": _INT, "d_max": {"type": "integer", "minimum": 2},
    },
}

DESCRIPTIONS = {
    "verify-jarzynski": (
        "Random Kraus channels and rank-r ensembles (d in [d_min, d_max]).\n"
        "Checks <exp(-sigma)> = sum_i exp(-C(Phi(|p_i><p_i|), rho_out)), <sigma> = dS = S(rho_out) - S(rho_in),\n"
        "the bound dS >= L_otm = -ln sum_i exp(-C(...)), the unital refinement 0 <= L_otm <= dS on random\n"
        "unitary mixtures, and the transition-probability form sigma_i = sum_j P(j|i)(-ln q_j + ln p_i)."
    ),
    "qae": (
        "Quantum autoencoder channel rho -> U^dag (Tr_B[U rho U^dag] (x) rho_B) U.\n"
        "Checks compressed states rho_A, rho_A^(i); L_otm = S(rho_B) - ln sum_i exp(-C(rho_A^(i), rho_A)) against\n"
        "the generic route; the entropic-disturbance bound and its rho_B independence; the global-cost chain\n"
        "L_otm <= dS <= S(eta_B) <= ln(d_B F[eta_B, I/d_B]) <= 2 ln(sqrt(1-C) + sqrt((d_B-1) C));\n"
        "and variational training of the global cost C = 1 - <psi|eta_B|psi> (disentangling optimum)."
    ),
    "spin-boson": (
        "Qubit dephased by bosonic modes, H = (w0/2) sz + H_b + sz (x) sum_k (g_k a_k + g_k^* a_k^dag).\n"
        "Checks truncated-Fock bath energy change against sum_k w_k |g_k|^2 (sin(w_k tau/2)/(w_k/2))^2,\n"
        "unitality of the reduced channel, and dS >= L_otm >= 0 >= -beta dE_b over a tau grid (thermal operation)."
    ),
    "guessed-heat": (
        "Thermal operation with Gibbs input and a final Hamiltonian synthesized so rho_out is Gibbs.\n"
        "Checks the guessed-state identity <exp(-beta dE_s)> = exp(-beta dF) exp(-beta <Q>_b) exp(-S(Theta_sb || rho_s(tau) (x) rho_b)),\n"
        "the second-law-like inequality dS - beta <Q>_b >= 0 with the guessed heat <Q>_b, sigma = beta (dE_s - dF),\n"
        "and the exergy bound dE_s - dS/beta <= dE_s + ln(sum_i exp(-C))/beta."
    ),
    "random-suite": (
        "Small seeded pass over every module: OTM identities, autoencoder bound chain, spin-boson chain,\n"
        "guessed-heat identity."
    ),
}


def schema(experiment: str) -> dict:
    props = {**_COMMON, **_SPECIFIC[experiment]}
    props["experiment"] = {"const": experiment}
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": f"qxent {experiment} config",
        "type": "object",
        "properties": props,
        "required": ["experiment", "seeds"],
        "additionalProperties": False,
    }


# --------------------------------------------------------------------------
# verify-jarzynski

def _jarzynski_instance(args) -> dict:
    seed, k, d_min, d_max, max_kraus, with_transitions = args
    rng = np.random.default_rng([seed, k])
    d = int(rng.integers(d_min, d_max + 1))
    r = int(rng.integers(1, d + 1))
    n_ops = int(rng.integers(1, max_kraus + 1))
    ens = random_ensemble(d, r, [seed, k, 1])
    phi = random_channel(d, n_ops, [seed, k, 2])
    rep = jarzynski_report(ens, phi)
    out = {"seed": seed, "index": k, "d": d, "r": r, "n_ops": n_ops, "report": rep,
           "atoms": list(zip(ens.probs.tolist(), _sigmas(ens, phi)))}
    if with_transitions:
        P, q = transition_probabilities(ens, phi)
        from .otm import sigma_distribution
        sig = sigma_distribution(ens, phi).sigmas
        out["transition_sigma"] = float(np.max(np.abs(sigma_from_transitions(ens, P, q.values) - sig)))
        out["transition_mixture"] = float(np.max(np.abs(ens.probs @ P - q.values)))
        out["row_stochastic"] = float(np.max(np.abs(P.sum(axis=1) - 1.0)))
    return out


def _sigmas(ens, phi) -> list[float]:
    from .otm import sigma_distribution
    return sigma_distribution(ens, phi).sigmas.tolist()


def _unital_instance(args) -> dict:
    seed, k, d_min, d_max, max_kraus = args
    rng = np.random.default_rng([seed, k, 3])
    d = int(rng.integers(max(d_min, 2), d_max + 1))
    r = int(rng.integers(1, d + 1))
    ens = random_ensemble(d, r, [seed, k, 4])
    phi = random_unitary_mixture(d, int(rng.integers(1, max_kraus + 1)), [seed, k, 5])
    rep = jarzynski_report(ens, phi)
    return {"d": d, "r": r, "report": rep}


def run_verify_jarzynski(cfg: dict) -> ExperimentResult:
    tol = _tol(cfg)
    workers = cfg.get("workers", 1)
    trials = cfg.get("trials", 200)
    d_min, d_max = cfg.get("d_min", 2), cfg.get("d_max", 8)
    max_kraus = cfg.get("max_kraus", 4)
    n_trans = cfg.get("transition_trials", 100)
    n_unital = cfg.get("unital_trials", 100)
    tasks = [(s, k, d_min, d_max, max_kraus, k < n_trans) for s in cfg["seeds"] for k in range(trials)]
    inst = _map(_jarzynski_instance, tasks, workers)
    unital = _map(_unital_instance, [(s, k, d_min, d_max, max_kraus)
                                     for s in cfg["seeds"] for k in range(n_unital)], workers)

    res = ExperimentResult()
    reps = [x["report"] for x in inst]
    res.checks["theorem_identity"] = Check(max(r.identity_residual for r in reps), tol["identity"])
    res.checks["mean_sigma_identity"] = Check(max(r.mean_residual for r in reps), tol["identity"])
    res.checks["lower_bound"] = Check(min(r.bound_slack for r in reps), tol["bound_slack"], "min_slack")
    res.checks["jensen"] = Check(min(r.lhs - math.exp(-r.delta_S) for r in reps), tol["bound_slack"], "min_slack")
    trans = [x for x in inst if "transition_sigma" in x]
    if trans:
        res.checks["transition_sigma"] = Check(max(x["transition_sigma"] for x in trans), tol["identity"])
        res.checks["transition_mixture"] = Check(max(x["transition_mixture"] for x in trans), tol["identity"])
        res.checks["transition_row_stochastic"] = Check(max(x["row_stochastic"] for x in trans), tol["identity"])
    if unital:
        ureps = [x["report"] for x in unital]
        res.checks["unital_nonnegative"] = Check(min(r.l_otm for r in ureps), tol["bound_slack"], "min_slack")
        res.checks["unital_lower_bound"] = Check(min(r.bound_slack for r in ureps), tol["bound_slack"], "min_slack")
        res.checks["unital_flag"] = Check(float(sum(not r.unital for r in ureps)), 0.0)

    inst_table = Table(["seed", "index", "d", "r", "n_ops", "delta_S", "mean_sigma", "lhs", "rhs", "l_otm",
                        "identity_residual", "bound_slack"])
    atom_table = Table(["seed", "index", "atom", "weight", "sigma"])
    for x in inst:
        r = x["report"]
        inst_table.rows.append([x["seed"], x["index"], x["d"], x["r"], x["n_ops"], r.delta_S, r.mean_sigma,
                                r.lhs, r.rhs, r.l_otm, r.identity_residual, r.bound_slack])
        for i, (w, s) in enumerate(x["atoms"]):
            atom_table.rows.append([x["seed"], x["index"], i, w, s])
    res.tables["instances"] = inst_table
    res.tables["sigma_atoms"] = atom_table
    res.summary = {"instances": len(inst), "unital_instances": len(unital),
                   "max_abs_lhs_minus_rhs": res.checks["theorem_identity"].value}
    return res


# --------------------------------------------------------------------------
# qae

def _qae_random_instance(args) -> dict:
    seed, k, d_a, d_b, rank, mixed_fresh = args
    d = d_a * d_b
    u = mc.haar_unitary(d, [seed, k, 10])
    if mixed_fresh:
        rho_b = mc.random_density(d_b, None, [seed, k, 11])
    else:
        rho_b = mc.projector(mc.random_pure_state(d_b, [seed, k, 11]))
    r = rank if rank is not None else int(np.random.default_rng([seed, k, 12]).integers(1, d + 1))
    ens = random_ensemble(d, r, [seed, k, 13])
    return {"spec": QaeSpec(d_a, d_b, u, rho_b), "ens": ens}


def _qae_chain_task(args) -> dict:
    inst = _qae_random_instance(args)
    return {"chain": qae.bound_chain(inst["spec"], inst["ens"])}


def _qae_two_path_task(args) -> dict:
    inst = _qae_random_instance(args)
    special, _ = qae.qae_l_otm(inst["spec"], inst["ens"])
    return {"residual": abs(special - qae.generic_l_otm(inst["spec"], inst["ens"]))}


def _qae_disturbance_task(args) -> dict:
    inst = _qae_random_instance(args)
    dist = qae.entropic_disturbance(inst["ens"], qae_channel(inst["spec"]))
    seed, k = args[0], args[1]
    d = inst["spec"].dim
    uni = qae.entropic_disturbance(inst["ens"], unitary_channel(mc.haar_unitary(d, [seed, k, 14])))
    return {"dist": dist, "unitary": uni}


def _train_task(args) -> dict:
    seed, d_a, d_b, layers, rank, max_evals, method = args
    ens = random_ensemble(d_a * d_b, rank, [seed, 20])
    res = qae.train(ens, qae.Ansatz(d_a, d_b, layers), qae.TrainOptions(max_evals=max_evals, seed=seed,
                                                                          method=method))
    return {"seed": seed, "result": res}


def _plateau_task(args) -> dict:
    seed, d_a, d_b, layers, max_evals, method = args
    d = d_a * d_b
    ens = MeasuredEnsemble(np.full(d, 1.0 / d), np.eye(d))
    res = qae.train(ens, qae.Ansatz(d_a, d_b, layers), qae.TrainOptions(max_evals=max_evals, seed=seed,
                                                                          method=method))
    return {"seed": seed, "result": res}


def run_qae(cfg: dict) -> ExperimentResult:
    tol = _tol(cfg)
    workers = cfg.get("workers", 1)
    d_a, d_b, layers = cfg.get("d_a", 2), cfg.get("d_b", 2), cfg.get("layers", 4)
    rank = cfg.get("rank", d_a)
    method = cfg.get("method", "fourier")
    seeds = cfg["seeds"]
    res = ExperimentResult()

    n_chain = cfg.get("random_specs", 100)
    chains = _map(_qae_chain_task, [(s, k, d_a, d_b, None, False) for s in seeds for k in range(n_chain)], workers)
    n_two = cfg.get("two_path_specs", 50)
    two = _map(_qae_two_path_task, [(s, 1000 + k, d_a, d_b, None, True) for s in seeds for k in range(n_two)],
               workers)
    n_dist = cfg.get("disturbance_specs", 50)
    dist = _map(_qae_disturbance_task, [(s, 2000 + k, d_a, d_b, None, True) for s in seeds for k in range(n_dist)],
                workers)
    trained = _map(_train_task, [(s, d_a, d_b, layers, rank, cfg.get("max_evals", 5000), method) for s in seeds],
                   workers)
    plateau = _map(_plateau_task, [(s, d_a, d_b, layers, cfg.get("plateau_evals", 500), method) for s in seeds],
                   workers)

    all_chains = [x["chain"] for x in chains] + [t["result"].report.chain for t in trained]
    if two:
        res.checks["l_otm_two_path"] = Check(max(x["residual"] for x in two), tol["identity"])
    if all_chains:
        res.checks["bound_chain"] = Check(
            min(min(c.slacks.values()) for c in all_chains), tol["bound_slack"], "min_slack")
        res.checks["araki_lieb"] = Check(min(c.araki_lieb_slack for c in all_chains), tol["bound_slack"],
                                         "min_slack")
        res.checks["cross_entropy_cost_bound"] = Check(min(c.overlap_slack for c in all_chains),
                                                       tol["bound_slack"], "min_slack")
    if dist:
        ds = [x["dist"] for x in dist]
        res.checks["disturbance_independence"] = Check(max(x.independence_residual for x in ds), tol["identity"])
        res.checks["disturbance_closed_form"] = Check(max(abs(x.closed_form - x.delta_chi) for x in ds),
                                                      tol["identity"])
        res.checks["disturbance_general_bound"] = Check(min(x.ub_general - x.delta_chi for x in ds),
                                                        tol["bound_slack"], "min_slack")
        res.checks["disturbance_qae_bound"] = Check(min(x.ub_qae - x.delta_chi for x in ds), tol["bound_slack"],
                                                    "min_slack")
        us = [x["unitary"] for x in dist]
        res.checks["unitary_zero_disturbance"] = Check(max(abs(x.delta_chi) for x in us), tol["identity"])
        res.checks["unitary_tight_bound"] = Check(max(abs(x.ub_general - x.delta_chi) for x in us),
                                                  tol["identity"])
    if trained:
        res.checks["training_cost"] = Check(max(t["result"].cost for t in trained), tol["training_cost"])
        res.checks["training_budget"] = Check(float(max(t["result"].n_evals for t in trained)),
                                              float(cfg.get("max_evals", 5000)))
    if plateau:
        target = 1.0 - 1.0 / d_b
        res.checks["mixed_input_plateau"] = Check(max(abs(t["result"].cost - target) for t in plateau),
                                                  tol["plateau"])

    trace = Table(["seed", "evaluation", "best_cost"])
    for t in trained:
        for i, c in enumerate(t["result"].trace):
            trace.rows.append([t["seed"], i + 1, c])
    slack = Table(["source", "index", "l_otm", "delta_S", "s_eta", "ln_dF", "ub_cost", "cost"])
    for i, c in enumerate(x["chain"] for x in chains):
        slack.rows.append(["random", i, c.l_otm, c.delta_S, c.s_eta, c.ln_dF, c.ub_cost, c.cost])
    for t in trained:
        c = t["result"].report.chain
        slack.rows.append(["trained", t["seed"], c.l_otm, c.delta_S, c.s_eta, c.ln_dF, c.ub_cost, c.cost])
    res.tables["cost_trace"] = trace
    res.tables["bound_slacks"] = slack
    res.summary = {
        "trained": [{"seed": t["seed"], "cost": t["result"].cost, "evaluations": t["result"].n_evals,
                     "theta": t["result"].theta.tolist()} for t in trained],
        "random_specs": len(chains),
    }
    return res


# --------------------------------------------------------------------------
# spin-boson

def _modes(raw) -> tuple[tuple[float, complex], ...]:
    return tuple((m[0], complex(m[1], m[2] if len(m) > 2 else 0.0)) for m in raw)


def _qubit_ensemble(probs) -> MeasuredEnsemble:
    plus_minus = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    p = np.asarray(probs, dtype=float)
    return MeasuredEnsemble(p / p.sum(), plus_minus)


def _sb_tau_task(args) -> list:
    params, probs, tau = args
    p = replace(params, tau=tau)
    ens = _qubit_ensemble(probs)
    rep = sb.spinboson_bound_report(p, ens)
    sim = sb.simulate_thermal_operation(p, ens.state())
    return [tau, sb.delta_E_b_analytic(p), sim.delta_E_b_numeric, rep.l_otm, rep.delta_S,
            rep.minus_beta_delta_E_b, sim.unital_residual, rep.chain_ok]


def _sb_random_task(args) -> dict:
    seed, k, cutoff = args
    rng = np.random.default_rng([seed, k, 30])
    n_modes = int(rng.integers(1, 3))
    modes = tuple((float(rng.uniform(0.5, 2.0)),
                   complex(*(rng.uniform(-0.7, 0.7, size=2)))) for _ in range(n_modes))
    p = sb.SpinBosonParams(float(rng.uniform(0.0, 2.0)), modes, beta=float(rng.uniform(0.5, 2.0)),
                           tau=float(rng.uniform(0.0, 2 * math.pi)), fock_cutoff=cutoff)
    ens = random_ensemble(2, 2, [seed, k, 31])
    rep = sb.spinboson_bound_report(p, ens)
    return {"report": rep, "unital": sb.simulate_thermal_operation(p).unital_residual}


def run_spin_boson(cfg: dict) -> ExperimentResult:
    tol = _tol(cfg)
    workers = cfg.get("workers", 1)
    params = sb.SpinBosonParams(cfg.get("omega0", 1.0), _modes(cfg.get("modes", [[1.0, 0.5]])),
                                beta=cfg.get("beta", 1.0), tau=cfg.get("tau", math.pi),
                                fock_cutoff=cfg.get("cutoff_start", 8))
    probs = cfg.get("ensemble_probs", [0.7, 0.3])
    res = ExperimentResult()

    value, cutoff, previous = sb.converged_delta_E_b(params, start=params.fock_cutoff,
                                                     max_cutoff=cfg.get("cutoff_max", 64))
    analytic = sb.delta_E_b_analytic(params)
    res.checks["delta_E_b_converged"] = Check(abs(value - analytic), tol["energy"])
    conv = Table(["cutoff", "delta_E_b_numeric", "delta_E_b_analytic"])
    c = params.fock_cutoff
    while c <= cutoff:
        conv.rows.append([c, sb.simulate_thermal_operation(replace(params, fock_cutoff=c)).delta_E_b_numeric,
                          analytic])
        c *= 2
    res.tables["cutoff_convergence"] = conv

    conv_params = replace(params, fock_cutoff=cutoff)
    grid = cfg.get("tau_grid", {"start": 0.0, "stop": 2 * math.pi, "num": 21})
    taus = np.linspace(grid["start"], grid["stop"], grid["num"]).tolist()
    rows = _map(_sb_tau_task, [(conv_params, probs, t) for t in taus], workers)
    sweep = Table(["tau", "delta_E_b_analytic", "delta_E_b_numeric", "l_otm", "delta_S",
                   "minus_beta_delta_E_b", "unital_residual", "chain_ok"])
    sweep.rows = rows
    res.tables["tau_sweep"] = sweep
    res.checks["unital_residual"] = Check(max(r[6] for r in rows), tol["unital"])
    res.checks["tau_grid_chain"] = Check(float(sum(not r[7] for r in rows)), 0.0)
    res.checks["tau_grid_energy"] = Check(max(abs(r[1] - r[2]) for r in rows), tol["energy"])

    n_rand = cfg.get("random_draws", 20)
    rand = _map(_sb_random_task, [(s, k, cfg.get("random_cutoff", 10)) for s in cfg["seeds"]
                                  for k in range(n_rand)], workers)
    if rand:
        res.checks["random_chain"] = Check(float(sum(not x["report"].chain_ok for x in rand)), 0.0)
        res.checks["random_unital"] = Check(max(x["unital"] for x in rand), tol["unital"])
    res.summary = {"converged_cutoff": cutoff, "delta_E_b_numeric": value, "delta_E_b_previous": previous,
                   "delta_E_b_analytic": analytic, "tau_points": len(rows), "random_draws": len(rand)}
    return res


# --------------------------------------------------------------------------
# guessed-heat

def _guessed_random_task(args):
    seed, k = args
    h_s0 = mc.random_hermitian(2, [seed, k, 40])
    h_b = mc.random_hermitian(2, [seed, k, 41])
    u = mc.haar_unitary(4, [seed, k, 42])
    beta = float(np.random.default_rng([seed, k, 43]).uniform(0.5, 2.0))
    return thermo.guessed_heat_identity_report(thermo.synthesized_setup(h_s0, h_b, u, beta))


def run_guessed_heat(cfg: dict) -> ExperimentResult:
    tol = _tol(cfg)
    workers = cfg.get("workers", 1)
    p = sb.SpinBosonParams(cfg.get("omega0", 1.0), ((cfg.get("mode_omega", 1.0), cfg.get("coupling", 0.2)),),
                           beta=cfg.get("beta", 1.0), tau=cfg.get("tau", math.pi),
                           fock_cutoff=cfg.get("cutoff", 12))
    model = sb.build_truncated_model(p)
    u = mc.propagator(model.h_total, p.tau)
    h_s0 = (p.omega0 / 2) * sb.SIGMA_Z
    sb_rep = thermo.guessed_heat_identity_report(thermo.synthesized_setup(h_s0, model.h_b, u, p.beta))
    res = ExperimentResult()
    res.checks["spin_boson_identity"] = Check(sb_rep.identity_residual, tol["guessed_identity"])
    res.checks["spin_boson_second_law"] = Check(sb_rep.second_law_slack, tol["bound_slack"], "min_slack")

    n = cfg.get("instances", 20)
    reps = _map(_guessed_random_task, [(s, k) for s in cfg["seeds"] for k in range(n)], workers)
    allr = [sb_rep] + reps
    if reps:
        res.checks["random_identity"] = Check(max(r.identity_residual for r in reps), tol["guessed_identity"])
    res.checks["second_law"] = Check(min(r.second_law_slack for r in allr), tol["bound_slack"], "min_slack")
    res.checks["exergy_bound"] = Check(min(r.exergy_ub - r.exergy for r in allr), tol["bound_slack"], "min_slack")
    res.checks["sigma_energy_relation"] = Check(max(r.sigma_energy_residual for r in allr), tol["identity"])
    table = Table(["instance", "lhs", "rhs_product", "identity_residual", "delta_S", "q_guess",
                   "second_law_slack", "exergy", "exergy_ub"])
    for i, r in enumerate(allr):
        table.rows.append([i, r.lhs, r.rhs_product, r.identity_residual, r.delta_S, r.q_guess,
                           r.second_law_slack, r.exergy, r.exergy_ub])
    res.tables["guessed_heat"] = table
    res.summary = {"instances": len(allr), "bath_tail_mass": model.tail_mass}
    return res


# --------------------------------------------------------------------------
# random-suite

def run_random_suite(cfg: dict) -> ExperimentResult:
    trials = cfg.get("trials", 20)
    d_max = cfg.get("d_max", 6)
    base = {k: cfg[k] for k in ("seeds", "tolerances", "workers") if k in cfg}
    res = ExperimentResult()
    res.merge(run_verify_jarzynski({**base, "trials": trials, "d_max": d_max, "unital_trials": trials,
                                    "transition_trials": trials}), "otm")
    res.merge(run_qae({**base, "random_specs": trials, "two_path_specs": trials, "disturbance_specs": trials,
                       "max_evals": 2000, "plateau_evals": 100}), "qae")
    res.merge(run_spin_boson({**base, "tau_grid": {"start": 0.0, "stop": 2 * math.pi, "num": 5},
                              "random_draws": trials, "random_cutoff": 8}), "spin_boson")
    res.merge(run_guessed_heat({**base, "instances": trials}), "guessed_heat")
    return res


RUNNERS = {
    "verify-jarzynski": run_verify_jarzynski,
    "qae": run_qae,
    "spin-boson": run_spin_boson,
    "guessed-heat": run_guessed_heat,
    "random-suite": run_random_suite,
}
