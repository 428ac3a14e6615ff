"""Slot-loop simulation engine.

Per drop: build topology, compute each UE's open-loop power once (large-scale
losses are static within a drop), then per slot: schedule each cell from
delayed rate estimates, couple interference across cells per RB index, realize
throughput through the AMC curve, and update PF state and metrics.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .linkbudget import AmcCurve, NoiseModel, amc_realized, snr_of
from .powerctl import ControllerSpec, CnbParams, compute_powers
from .scheduler import PfState, RbGrid, SlotAllocation, allocate
from .topology import (PathLossMap, SiteLayout, build_hex_layout,
                       build_path_loss_map, cells_of, drop_ues)
from .units import db_to_linear

__all__ = [
    "SimConfig",
    "NetworkSnapshot",
    "MetricsAccumulator",
    "apply_delay",
    "build_snapshot",
    "simulate",
    "run_drop",
    "run",
]


@dataclass(frozen=True)
class SimConfig:
    controller: ControllerSpec
    rings: int = 2
    isd_m: float = 500.0
    ues_per_cell: int = 10
    min_dist_m: float = 35.0
    n_slots: int = 2000
    slot_duration_s: float = 1e-3
    n_drops: int = 5
    seed: int = 0
    fading: bool = False
    delay_slots: int = 6
    combining_gain_db: float = 3.0
    staircase: bool = False
    alpha: float = 1.0
    beta: float = 1.0
    ewma: float = 0.01
    grid: RbGrid = field(default_factory=RbGrid)
    noise: NoiseModel = field(default_factory=NoiseModel)
    curve: AmcCurve = field(default_factory=AmcCurve)

    def __post_init__(self):
        if self.slot_duration_s <= 0:
            raise ValueError("slot duration must be positive")
        if self.n_slots < 0 or self.n_drops < 0:
            raise ValueError("slot and drop counts must be nonnegative")
        if self.delay_slots < 1:
            raise ValueError("delay_slots must be >= 1")


@dataclass(frozen=True)
class NetworkSnapshot:
    """One drop's static topology: the only channel knowledge controllers see."""

    layout: SiteLayout | None
    serving: np.ndarray                 # (n_ues,) serving cell index
    plmap: PathLossMap

    @property
    def n_ues(self) -> int:
        return self.plmap.loss_db.shape[0]

    @property
    def n_cells(self) -> int:
        return self.plmap.loss_db.shape[1]


@dataclass
class MetricsAccumulator:
    """Per-UE running totals over one or more drops.

    Per-UE arrays from different drops concatenate; totals add. duration_s is
    each UE's observed time, so throughput ratios stay correct after merging
    accumulators with different slot counts.
    """

    bits: np.ndarray
    energy_j: np.ndarray
    snr_lin_sum: np.ndarray
    iot_lin_sum: np.ndarray
    sched_slots: np.ndarray
    duration_s: np.ndarray
    n_cells: int
    n_drops: int = 1

    @classmethod
    def empty(cls, n_ues: int, n_cells: int,
              duration_s: float) -> "MetricsAccumulator":
        zeros = lambda: np.zeros(n_ues)
        return cls(bits=zeros(), energy_j=zeros(), snr_lin_sum=zeros(),
                   iot_lin_sum=zeros(), sched_slots=zeros(),
                   duration_s=np.full(n_ues, duration_s), n_cells=n_cells)

    def merge(self, other: "MetricsAccumulator") -> "MetricsAccumulator":
        if self.n_cells != other.n_cells:
            raise ValueError("cannot merge accumulators over different layouts")
        cat = np.concatenate
        return MetricsAccumulator(
            bits=cat([self.bits, other.bits]),
            energy_j=cat([self.energy_j, other.energy_j]),
            snr_lin_sum=cat([self.snr_lin_sum, other.snr_lin_sum]),
            iot_lin_sum=cat([self.iot_lin_sum, other.iot_lin_sum]),
            sched_slots=cat([self.sched_slots, other.sched_slots]),
            duration_s=cat([self.duration_s, other.duration_s]),
            n_cells=self.n_cells,
            n_drops=self.n_drops + other.n_drops,
        )

    def per_ue_throughput_bps(self) -> np.ndarray:
        return self.bits / self.duration_s

    def time_avg_snr_db(self) -> np.ndarray:
        ok = self.sched_slots > 0
        out = np.full(len(self.bits), -np.inf)
        out[ok] = 10.0 * np.log10(self.snr_lin_sum[ok] / self.sched_slots[ok])
        return out

    def time_avg_iot_db(self) -> np.ndarray:
        ok = self.sched_slots > 0
        out = np.zeros(len(self.bits))
        out[ok] = 10.0 * np.log10(self.iot_lin_sum[ok] / self.sched_slots[ok])
        return out


def apply_delay(history, delay_slots: int, fallback=None):
    """Estimate vector from delay_slots before the most recent entry.

    Returns fallback (large-scale-only estimates during warm-up) when the
    history is too short.
    """
    idx = len(history) - 1 - delay_slots
    if idx < 0:
        return fallback
    return history[idx]


def build_snapshot(config: SimConfig, drop_seed: int) -> NetworkSnapshot:
    layout = build_hex_layout(rings=config.rings, isd=config.isd_m)
    ues = drop_ues(layout, config.ues_per_cell, config.min_dist_m, drop_seed)
    plmap = build_path_loss_map(layout, ues, drop_seed)
    serving = np.array([ue.serving_cell for ue in ues])
    return NetworkSnapshot(layout=layout, serving=serving, plmap=plmap)


def _resolve_cnb_threshold(config: SimConfig) -> ControllerSpec:
    spec = config.controller
    if spec.kind == "cnb" and spec.params.pl_th_db is None:
        params = replace(spec.params,
                         pl_th_db=spec.params.p_max_dbm - config.noise.n0_dbm)
        spec = ControllerSpec(kind="cnb", params=params)
    return spec


def _p_max_dbm(spec: ControllerSpec) -> float:
    return spec.params.p_max_dbm


def _occupancy(allocations: SlotAllocation, n_cells: int,
               grid: RbGrid) -> tuple[np.ndarray, np.ndarray]:
    """Per (cell, RB): occupying UE index (-1 if idle) and power in mW."""
    occ = np.full((n_cells, grid.total_rbs), -1, dtype=int)
    p_mw = np.zeros((n_cells, grid.total_rbs))
    for c, entries in allocations.items():
        for e in entries:
            occ[c, e.rb_start:e.rb_start + e.rb_len] = e.ue_id
            p_mw[c, e.rb_start:e.rb_start + e.rb_len] = 10.0 ** (
                e.per_rb_power_dbm / 10.0)
    return occ, p_mw


def compute_slot(allocations: SlotAllocation, snapshot: NetworkSnapshot,
                 config: SimConfig, fading_gain: np.ndarray | None = None,
                 gains: np.ndarray | None = None):
    """Couple interference across cells per RB index and realize throughput.

    Returns (bits per UE this slot, mean per-RB SINR per scheduled UE,
    mean SNR sample, mean IoT sample, energy per UE in joules).
    fading_gain, when given, multiplies the linear (UE, cell) channel gains;
    gains lets callers pass the precomputed large-scale gain matrix.
    """
    n_ues, n_cells = snapshot.plmap.loss_db.shape
    if gains is None:
        gains = db_to_linear(-snapshot.plmap.loss_db)
    if fading_gain is not None:
        gains = gains * fading_gain
    occ, p_mw = _occupancy(allocations, n_cells, config.grid)

    combine = db_to_linear(config.combining_gain_db)
    n0 = config.noise.n0_mw

    # Received power at every victim cell from every (cell, RB) transmitter.
    src_gain = gains[occ]                       # (C, K, V); occ=-1 rows unused
    contrib = p_mw[:, :, None] * src_gain       # zero where idle
    total_rx = contrib.sum(axis=0)              # (K, V)
    own = np.einsum("ckc->ck", contrib)         # signal at the serving cell
    interference = total_rx.T - own             # (C, K), other-cell co-channel

    active = occ >= 0
    sig = own * combine
    intf = interference * combine
    with np.errstate(divide="ignore", invalid="ignore"):
        sinr = np.where(active, sig / (intf + n0), 0.0)

    eff = amc_realized(sinr, config.curve, staircase=config.staircase)
    rb_bits = np.where(active, eff, 0.0) * (config.noise.rb_bandwidth_hz
                                            * config.slot_duration_s)

    bits = np.zeros(n_ues)
    sinr_sum = np.zeros(n_ues)
    snr_sum = np.zeros(n_ues)
    iot_sum = np.zeros(n_ues)
    rb_count = np.zeros(n_ues)
    energy = np.zeros(n_ues)

    ue_flat = occ[active]
    np.add.at(bits, ue_flat, rb_bits[active])
    np.add.at(sinr_sum, ue_flat, sinr[active])
    np.add.at(snr_sum, ue_flat, (sig / n0)[active])
    np.add.at(iot_sum, ue_flat, ((intf + n0) / n0)[active])
    np.add.at(rb_count, ue_flat, 1.0)
    np.add.at(energy, ue_flat, p_mw[active] * config.slot_duration_s / 1000.0)

    scheduled = rb_count > 0
    mean = lambda x: np.divide(x, rb_count, out=np.zeros(n_ues),
                               where=scheduled)
    return bits, mean(sinr_sum), mean(snr_sum), mean(iot_sum), energy, scheduled


def simulate(snapshot: NetworkSnapshot, config: SimConfig,
             powers_dbm: np.ndarray | None = None,
             fading_seed: int | None = None) -> MetricsAccumulator:
    """Run the slot loop on a prebuilt topology snapshot."""
    n_ues, n_cells = snapshot.plmap.loss_db.shape
    spec = _resolve_cnb_threshold(config)
    if powers_dbm is None:
        powers_dbm = compute_powers(spec, snapshot.plmap, snapshot.serving,
                                    config.noise, config.curve)
    p_max = _p_max_dbm(spec)

    cell_ues = [np.flatnonzero(snapshot.serving == c) for c in range(n_cells)]
    pf = PfState.fresh(n_ues, config.alpha, config.beta, config.ewma)
    acc = MetricsAccumulator.empty(n_ues, n_cells,
                                   config.n_slots * config.slot_duration_s)

    # Warm-up rate estimate: large-scale SNR only (no interference knowledge).
    serving_loss = snapshot.plmap.loss_db[np.arange(n_ues), snapshot.serving]
    snr0 = snr_of(powers_dbm, serving_loss, config.noise) * db_to_linear(
        config.combining_gain_db)
    est0 = amc_realized(snr0, config.curve,
                        staircase=config.staircase) * config.noise.rb_bandwidth_hz

    fad_rng = None
    if config.fading:
        fad_rng = np.random.default_rng(
            np.random.SeedSequence([0 if fading_seed is None else int(fading_seed), 2]))

    base_gains = db_to_linear(-snapshot.plmap.loss_db)
    history: list[np.ndarray] = []
    for _ in range(config.n_slots):
        est = apply_delay(history, config.delay_slots - 1, fallback=est0)
        allocations: SlotAllocation = {}
        for c in range(n_cells):
            ues = cell_ues[c]
            if ues.size == 0:
                continue
            entries = allocate(ues, est[ues], pf, config.grid,
                               tx_power_dbm=powers_dbm[ues], p_max_dbm=p_max)
            if entries:
                allocations[c] = entries

        fading_gain = None
        if fad_rng is not None:
            fading_gain = fad_rng.exponential(1.0, size=(n_ues, n_cells))

        bits, mean_sinr, mean_snr, mean_iot, energy, scheduled = compute_slot(
            allocations, snapshot, config, fading_gain, gains=base_gains)

        acc.bits += bits
        acc.energy_j += energy
        acc.snr_lin_sum += np.where(scheduled, mean_snr, 0.0)
        acc.iot_lin_sum += np.where(scheduled, mean_iot, 0.0)
        acc.sched_slots += scheduled

        served_rate = bits / config.slot_duration_s
        boot = scheduled & ~pf.served_once & (bits > 0)
        pf.avg_rate = np.where(
            boot, served_rate,
            np.where(pf.served_once,
                     (1.0 - pf.ewma) * pf.avg_rate + pf.ewma * served_rate,
                     pf.avg_rate))
        pf.served_once = pf.served_once | boot

        # Measured per-RB rate estimate; unscheduled UEs keep their last one.
        prev = history[-1] if history else est0
        new_est = np.where(scheduled,
                           amc_realized(mean_sinr, config.curve,
                                        staircase=config.staircase)
                           * config.noise.rb_bandwidth_hz,
                           prev)
        history.append(new_est)

    return acc


def run_drop(config: SimConfig, drop_index: int) -> MetricsAccumulator:
    """One random topology realization, deterministic given (seed, index)."""
    drop_seed = int(np.random.SeedSequence(
        [config.seed, drop_index]).generate_state(1)[0])
    snapshot = build_snapshot(config, drop_seed)
    return simulate(snapshot, config, fading_seed=drop_seed)


def run(config: SimConfig) -> list[MetricsAccumulator]:
    """All drops of a run; drops are independent and mergeable."""
    return [run_drop(config, d) for d in range(config.n_drops)]
