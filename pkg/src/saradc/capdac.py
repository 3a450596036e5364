"""Differential binary-weighted capacitive DAC with common-mode-preserving
switching, unit-capacitor mismatch, parasitic attenuation, per-bit settling
and switching-energy accounting, plus a split-array variant and a topology
trade study.

Switching scheme (the converter's discipline)
---------------------------------------------
The first comparison acts on the raw held sample.  The bit-i event
(i = 1..B-1) then applies an equal-and-opposite correction: the side that
must fall swings its bit capacitor's bottom plate from v_ref down to the
midpoint rail v_ref/2, the side that must rise swings its bit capacitor
from ground up to the midpoint rail.  Each capacitor therefore moves once,
in one direction, and the common mode is untouched by construction.

The bit's ladder weight is

    s_i = v_ref * (C_i_p / N_p + C_i_n / N_n),   N_side = C_total_side + c_p

(the net full scale over 2^i for a mismatch-free array); the half-reference
swings apply half of it, so the correction after decision i is s_i / 2 =
net full scale / 2^(i+1), which is exactly the binary-search ladder that
reproduces the ideal mid-rise transfer.

Energy convention (normative for this model)
--------------------------------------------
Event energy is the charge *delivered* by the reference rails (v_ref and
the v_ref/2 midpoint), priced at the rail voltage and evaluated at the
settled voltage targets; charge returned to a rail is not recovered.
Capacitors that have already fired sit on the midpoint rail and take part
as bystanders; unfired capacitors are uncounted (their armed rail is fixed
only by the decision that fires them).  Per event the positive deliveries
are the rising capacitor's charge from the midpoint rail and the
falling side's fired bystanders, giving

    E_i = (v_ref^2 / 4) * [C_r * (N_r - C_r) / N_r + M_f * C_f / N_f]

with M_f the fired capacitance on the falling side.  This is nonnegative
for every event, and the same closed form drives the independent per-event
oracle used in tests.

Topology trade study
--------------------
``compare_topologies`` reports, per topology, the physical capacitance and
sampling noise of the realized arrays, the converter-discipline energy, and
a textbook-discipline energy evaluated at matched total capacitance with no
parasitics ("ideal accounting"): the binary-weighted array runs the
classic trial/keep/reject charge-redistribution sequence, the split array
runs the recycling discipline in which every rejected trial is a single
small down-switch instead of a discharge-recharge pair.  The headline
energy-saving ratio compares those two matched-capacitance numbers; the
area, noise and nonlinearity rows use the attenuation-capacitor split array
at its physical size.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .config import AdcConfig, ConfigError, K_BOLTZMANN, net_full_scale

__all__ = [
    "CapArray", "SplitCapArray", "DacState", "TradeReport", "TopologyRow",
    "build_cap_array", "step_voltage", "switch_bit", "ron_schedule",
    "net_full_scale", "initial_state", "monotonic_energy_oracle",
    "conversion_energy", "conventional_energy", "splitcap_energy",
    "transfer_thresholds", "inl_from_steps", "compare_topologies",
]


# ---------------------------------------------------------------------------
# arrays

@dataclass(frozen=True)
class CapArray:
    """Realized differential binary-weighted array (one object, both sides).

    Bit capacitors are indexed 1..bits-1 MSB-first (array index i-1) and are
    built from 2^(bits-1-i) unit quanta each plus a one-unit terminator per
    side.  The construction quantum is c_dac / 2^(bits-1), which makes the
    mismatch-free step ladder exactly binary in the net full scale; the
    configured physical c_unit only bounds realizability.
    """
    bits: int
    v_ref: float
    c_par: float                 # per-side parasitic at the comparator node [F]
    c_bits_p: np.ndarray         # switched bit caps, positive side [F]
    c_bits_n: np.ndarray
    c_term_p: float              # terminator [F]
    c_term_n: float
    dev_p: np.ndarray            # realized relative bit-cap deviations
    dev_n: np.ndarray
    c_unit_eff: float            # construction quantum [F]
    topology: str = "binary"

    @property
    def c_total_p(self) -> float:
        return float(np.sum(self.c_bits_p)) + self.c_term_p

    @property
    def c_total_n(self) -> float:
        return float(np.sum(self.c_bits_n)) + self.c_term_n

    @property
    def node_p(self) -> float:
        """Total grounded capacitance at the positive comparator node [F]."""
        return self.c_total_p + self.c_par

    @property
    def node_n(self) -> float:
        return self.c_total_n + self.c_par

    def step_pair(self, i: int) -> tuple[float, float]:
        """Per-side step magnitudes for bit i [V]."""
        return (self.v_ref * self.c_bits_p[i - 1] / self.node_p,
                self.v_ref * self.c_bits_n[i - 1] / self.node_n)


def _draw_units(n_units: int, sigma_u: float, rng: np.random.Generator,
                max_retries: int = 100) -> np.ndarray:
    """Relative unit deviations, redrawing any that would kill a capacitor."""
    if sigma_u == 0.0:
        return np.zeros(n_units)
    dev = rng.normal(0.0, sigma_u, size=n_units)
    for _ in range(max_retries):
        bad = dev <= -1.0
        if not bad.any():
            return dev
        dev[bad] = rng.normal(0.0, sigma_u, size=int(bad.sum()))
    raise ConfigError("sigma_u: could not draw positive unit capacitors")


def _side_caps(bits: int, u_eff: float, sigma_u: float,
               rng: np.random.Generator) -> tuple[np.ndarray, float, np.ndarray]:
    """One side's bit caps and terminator from per-unit draws.

    Bit i is the sum of its 2^(bits-1-i) constituent units, so its relative
    spread shrinks with the square root of the unit count.
    """
    counts = [2 ** (bits - 1 - i) for i in range(1, bits)]
    dev = _draw_units(2 ** (bits - 1), sigma_u, rng)
    caps = np.empty(bits - 1)
    pos = 0
    for k, n in enumerate(counts):
        caps[k] = u_eff * (n + float(np.sum(dev[pos:pos + n])))
        pos += n
    term = u_eff * (1.0 + float(dev[pos]))
    nominal = u_eff * np.asarray(counts, dtype=float)
    return caps, term, caps / nominal - 1.0


def build_cap_array(cfg: AdcConfig, rng: np.random.Generator) -> "CapArray | SplitCapArray":
    """Draw a realized array for the configured topology."""
    if cfg.topology == "split":
        return build_split_array(cfg, rng)
    u_eff = cfg.c_dac / 2 ** (cfg.bits - 1)
    caps_p, term_p, dev_p = _side_caps(cfg.bits, u_eff, cfg.sigma_u, rng)
    caps_n, term_n, dev_n = _side_caps(cfg.bits, u_eff, cfg.sigma_u, rng)
    return CapArray(
        bits=cfg.bits, v_ref=cfg.v_ref, c_par=cfg.c_p,
        c_bits_p=caps_p, c_bits_n=caps_n, c_term_p=term_p, c_term_n=term_n,
        dev_p=dev_p, dev_n=dev_n, c_unit_eff=u_eff,
    )


def step_voltage(i: int, array) -> float:
    """Differential correction magnitude for bit i [V], both sides combined."""
    if not 1 <= i <= array.bits - 1:
        raise ValueError(f"step_voltage: bit index {i} outside 1..{array.bits - 1}")
    dp, dn = array.step_pair(i)
    return dp + dn


def ron_schedule(array, cfg: AdcConfig, printed_form: bool = False) -> np.ndarray:
    """Per-bit DAC switch on-resistances [Ohm].

    The constant-tau rule r_i * C_i = t_phic_low / n_settle gives every bit
    the same fractional settling error exp(-n_settle) inside the
    comparator-off window.  ``printed_form`` selects the alternative
    r_i = 1 / (n_settle * C_i * t_phic_low) rule preserved for fidelity
    audits; its units do not reduce to ohms, so it is not the default.
    """
    if isinstance(cfg.ron_dac, tuple):
        return np.asarray(cfg.ron_dac, dtype=float)
    c_nom = cfg.c_dac / 2.0 ** np.arange(1, cfg.bits)
    if printed_form:
        return 1.0 / (cfg.n_settle * c_nom * cfg.t_phic_low)
    return cfg.t_phic_low / (cfg.n_settle * c_nom)


# ---------------------------------------------------------------------------
# conversion-time switching

@dataclass(frozen=True)
class DacState:
    """Comparator-side plate voltages plus switching bookkeeping."""
    v_p: float
    v_n: float
    target_p: float        # settled asymptote, positive side [V]
    target_n: float
    switched: tuple        # bit indices already fired this conversion
    mid_p: float           # capacitance parked on the midpoint rail [F]
    mid_n: float
    energy: float          # accumulated switching energy [J]

    @property
    def v_diff(self) -> float:
        return self.v_p - self.v_n

    @property
    def v_cm(self) -> float:
        return 0.5 * (self.v_p + self.v_n)


def initial_state(v_p: float, v_n: float) -> DacState:
    return DacState(v_p=v_p, v_n=v_n, target_p=v_p, target_n=v_n,
                    switched=(), mid_p=0.0, mid_n=0.0, energy=0.0)


def _event_energy(c_fall: float, n_fall: float, mid_fall: float,
                  c_rise: float, n_rise: float, v_ref: float) -> float:
    """Delivered-charge energy of one equal-and-opposite event [J]."""
    return 0.25 * v_ref ** 2 * (c_rise * (n_rise - c_rise) / n_rise
                                + mid_fall * c_fall / n_fall)


def switch_bit(state: DacState, i: int, decision: int, dt: float,
               array, cfg: AdcConfig) -> DacState:
    """Apply the bit-i correction for a +/-1 decision over dt seconds.

    Each side's target moves by a quarter of the bit's ladder weight
    (half-reference bottom-plate swings, equal and opposite), so the
    differential correction is step_voltage(i) / 2.  Actual plate voltages
    settle exponentially toward the targets with the per-bit switch time
    constant r_i * C_i.
    """
    if dt <= 0.0:
        raise ValueError(f"switch_bit: nonpositive settle window dt = {dt:g}")
    if i in state.switched:
        raise ValueError(f"switch_bit: bit {i} already switched this conversion")
    if decision not in (-1, 1):
        raise ValueError(f"switch_bit: decision must be +/-1, got {decision!r}")

    dp, dn = array.step_pair(i)
    new_tp = state.target_p - decision * dp / 2.0
    new_tn = state.target_n + decision * dn / 2.0

    r_i = ron_schedule(array, cfg)[i - 1]
    g_p = math.exp(-dt / (r_i * array.c_bits_p[i - 1]))
    g_n = math.exp(-dt / (r_i * array.c_bits_n[i - 1]))
    new_vp = new_tp - (new_tp - state.v_p) * g_p
    new_vn = new_tn - (new_tn - state.v_n) * g_n

    if decision > 0:
        c_fall, n_fall, mid_fall = array.c_bits_p[i - 1], array.node_p, state.mid_p
        c_rise, n_rise = array.c_bits_n[i - 1], array.node_n
    else:
        c_fall, n_fall, mid_fall = array.c_bits_n[i - 1], array.node_n, state.mid_n
        c_rise, n_rise = array.c_bits_p[i - 1], array.node_p
    e_event = _event_energy(c_fall, n_fall, mid_fall, c_rise, n_rise, array.v_ref)

    return DacState(
        v_p=new_vp, v_n=new_vn, target_p=new_tp, target_n=new_tn,
        switched=state.switched + (i,),
        mid_p=state.mid_p + array.c_bits_p[i - 1],
        mid_n=state.mid_n + array.c_bits_n[i - 1],
        energy=state.energy + e_event,
    )


def monotonic_energy_oracle(decisions, array) -> float:
    """Independent per-event CV accounting for a full decision sequence [J].

    Walks the closed form
      E_i = (v_ref^2 / 4) * (C_r*(N_r - C_r)/N_r + M_f*C_f/N_f)
    tracking the fired capacitance per side; cross-checks the incremental
    accounting in switch_bit.
    """
    q = 0.25 * array.v_ref ** 2
    mid_p = mid_n = 0.0
    total = 0.0
    for k, d in enumerate(decisions[: array.bits - 1]):
        cp = array.c_bits_p[k]
        cn = array.c_bits_n[k]
        np_, nn_ = array.node_p, array.node_n
        if d > 0:
            total += q * (cn * (nn_ - cn) / nn_ + mid_p * cp / np_)
        else:
            total += q * (cp * (np_ - cp) / np_ + mid_n * cn / nn_)
        mid_p += cp
        mid_n += cn
    return total


def conversion_energy(code: int, array, cfg: AdcConfig) -> float:
    """Converter-discipline switching energy for one output code [J].

    The decision sequence of a SAR conversion is the code's bit pattern,
    so sweeping codes sweeps every possible switching trajectory.
    """
    bits = [(code >> (array.bits - 1 - k)) & 1 for k in range(array.bits)]
    state = initial_state(cfg.v_cm, cfg.v_cm)
    for k in range(array.bits - 1):
        d = 1 if bits[k] else -1
        state = switch_bit(state, k + 1, d, cfg.t_phic_low, array, cfg)
    return state.energy


# ---------------------------------------------------------------------------
# split (attenuation-capacitor) array

@dataclass(frozen=True)
class SplitCapArray:
    """Attenuation-capacitor split array, both sides.

    Per side the switched ladder is divided into a main segment (bits
    1..m_bits, binary-weighted in the physical unit) and a sub segment
    coupled through c_att sized so the series branch presents exactly one
    unit at the main node; the sub terminator completes the sub segment.
    The comparator parasitic c_par loads the main node and an equal
    parasitic loads the attenuation node, which is where this topology's
    nonlinearity comes from.

    For conversion-time energy accounting the realized per-side steps are
    mapped to equivalent single-node capacitances at the main node, and the
    common-mode-preserving discipline runs on those (documented behavioral
    equivalence; the trade study's textbook numbers use exact networks).
    """
    bits: int
    m_bits: int
    l_bits: int
    v_ref: float
    c_par: float
    c_att: float
    main_p: np.ndarray      # main-segment switched caps [F]
    main_n: np.ndarray
    sub_p: np.ndarray       # sub-segment switched caps [F]
    sub_n: np.ndarray
    sub_term_p: float
    sub_term_n: float
    topology: str = "split"

    def _net(self, side: str) -> tuple[float, float, float]:
        """(grounded-at-main, grounded-at-sub, c_att) for one side [F]."""
        if side == "p":
            a = float(np.sum(self.main_p)) + self.c_par
            b = float(np.sum(self.sub_p)) + self.sub_term_p + self.c_par
        else:
            a = float(np.sum(self.main_n)) + self.c_par
            b = float(np.sum(self.sub_n)) + self.sub_term_n + self.c_par
        return a, b, self.c_att

    def _node_eff(self, side: str) -> float:
        a, b, k = self._net(side)
        return a + k * b / (k + b)

    @property
    def node_p(self) -> float:
        """Effective grounded capacitance seen at the positive main node [F]."""
        return self._node_eff("p")

    @property
    def node_n(self) -> float:
        return self._node_eff("n")

    @property
    def c_total_p(self) -> float:
        """Physical capacitor area total, positive side [F]."""
        return float(np.sum(self.main_p) + np.sum(self.sub_p)) + self.sub_term_p + self.c_att

    @property
    def c_total_n(self) -> float:
        return float(np.sum(self.main_n) + np.sum(self.sub_n)) + self.sub_term_n + self.c_att

    def _side_step(self, i: int, side: str) -> float:
        """Main-node voltage step when bit i swings by v_ref on one side [V]."""
        a, b, k = self._net(side)
        if i <= self.m_bits:
            c = (self.main_p if side == "p" else self.main_n)[i - 1]
            return self.v_ref * c / (a + k * b / (k + b))
        c = (self.sub_p if side == "p" else self.sub_n)[i - self.m_bits - 1]
        dv_s = self.v_ref * c / (b + k * a / (k + a))
        return dv_s * k / (a + k)

    def step_pair(self, i: int) -> tuple[float, float]:
        return self._side_step(i, "p"), self._side_step(i, "n")

    @property
    def c_bits_p(self) -> np.ndarray:
        """Equivalent single-node bit capacitances, positive side [F]."""
        n = self.node_p
        return np.array([self._side_step(i, "p") * n / self.v_ref
                         for i in range(1, self.bits)])

    @property
    def c_bits_n(self) -> np.ndarray:
        n = self.node_n
        return np.array([self._side_step(i, "n") * n / self.v_ref
                         for i in range(1, self.bits)])


def build_split_array(cfg: AdcConfig, rng: np.random.Generator) -> SplitCapArray:
    """Draw a realized split array using the physical unit capacitor."""
    l_bits = (cfg.bits - 1) // 2
    m_bits = cfg.bits - 1 - l_bits
    u = cfg.c_unit

    def segment(counts):
        dev = _draw_units(int(sum(counts)), cfg.sigma_u, rng)
        caps, pos = [], 0
        for n in counts:
            caps.append(u * (n + float(np.sum(dev[pos:pos + n]))))
            pos += n
        return np.asarray(caps)

    main_counts = [2 ** (m_bits - i) for i in range(1, m_bits + 1)]
    sub_counts = [2 ** (l_bits - j) for j in range(1, l_bits + 1)] + [1]
    main_p = segment(main_counts)
    main_n = segment(main_counts)
    sub_all_p = segment(sub_counts)
    sub_all_n = segment(sub_counts)
    c_att = u * 2 ** l_bits / (2 ** l_bits - 1)
    return SplitCapArray(
        bits=cfg.bits, m_bits=m_bits, l_bits=l_bits, v_ref=cfg.v_ref,
        c_par=cfg.c_p, c_att=c_att,
        main_p=main_p, main_n=main_n,
        sub_p=sub_all_p[:-1], sub_n=sub_all_n[:-1],
        sub_term_p=float(sub_all_p[-1]), sub_term_n=float(sub_all_n[-1]),
    )


# ---------------------------------------------------------------------------
# static transfer from a step ladder

def transfer_thresholds(steps: np.ndarray, bits: int) -> np.ndarray:
    """All 2^bits - 1 code transition voltages of a binary search [V].

    steps[k] is the differential correction of bit k+1.  The boundary
    between codes at depth j is the cumulative DAC position of the path
    prefix, enumerated breadth-first.
    """
    thresholds = np.empty(2 ** bits - 1)
    positions = np.array([0.0])
    for j in range(1, bits + 1):
        stride = 2 ** (bits - j)
        idx = (2 * np.arange(len(positions)) + 1) * stride - 1
        thresholds[idx] = positions
        if j <= bits - 1:
            s = steps[j - 1]
            positions = np.stack([positions - s, positions + s], axis=1).ravel()
    return thresholds


def inl_from_steps(steps: np.ndarray, bits: int, delta: float) -> np.ndarray:
    """Endpoint-fit integral nonlinearity of a realized ladder [LSB]."""
    t = transfer_thresholds(steps, bits)
    ideal = (np.arange(1, 2 ** bits) - 2 ** (bits - 1)) * delta
    err = t - ideal
    x = np.linspace(0.0, 1.0, len(err))
    err = err - (err[0] + (err[-1] - err[0]) * x)
    return err / delta


# ---------------------------------------------------------------------------
# textbook disciplines at matched capacitance ("ideal accounting")

def _transition_energy(caps: np.ndarray, n_total: float, on_before: np.ndarray,
                       on_after: np.ndarray) -> float:
    """Reference charge energy of one bottom-plate state change.

    Normalized units (v_ref = 1); caps connected to the reference after the
    event pay/return C * (db - dv_top) each.
    """
    dv = float(np.sum(caps * (on_after - on_before))) / n_total
    db = on_after - on_before
    return float(np.sum(caps[on_after > 0] * (db[on_after > 0] - dv)))


def conventional_energy(code: int, bits: int) -> float:
    """Classic trial/keep/reject charge-redistribution energy, single side.

    Normalized to unit capacitance and unit reference; the array is the
    full binary ladder plus terminator (2^bits units total).  The trial
    sequence starts with the top bit set; a kept trial charges the next
    capacitor, a rejected trial discharges its own and charges the next.
    """
    caps = np.array([2.0 ** (bits - 1 - k) for k in range(bits)] + [1.0])
    n_total = float(np.sum(caps))
    state = np.zeros(bits + 1)
    new = state.copy()
    new[0] = 1.0
    total = _transition_energy(caps, n_total, state, new)
    state = new
    for k in range(bits - 1):
        keep = (code >> (bits - 1 - k)) & 1
        new = state.copy()
        if not keep:
            new[k] = 0.0
        new[k + 1] = 1.0
        total += _transition_energy(caps, n_total, state, new)
        state = new
    return total


def splitcap_energy(code: int, bits: int) -> float:
    """Recycling-discipline energy on the split array, single side.

    Same total capacitance as the conventional array: the top weight is
    split into a bank replicating the lower ladder (sizes 2^(bits-2)..1
    plus a duplicate unit).  Every rejected trial discharges one bank
    capacitor of the next trial's weight; kept trials charge lower
    capacitors exactly as the conventional sequence does.
    """
    bank = [2.0 ** (bits - 2 - k) for k in range(bits - 1)] + [1.0]
    lower = [2.0 ** (bits - 1 - k) for k in range(1, bits)]
    caps = np.array(bank + lower + [1.0])
    n_total = float(np.sum(caps))
    n_bank = len(bank)
    state = np.zeros(len(caps))
    new = state.copy()
    new[:n_bank] = 1.0
    total = _transition_energy(caps, n_total, state, new)
    state = new
    for k in range(bits - 1):
        keep = (code >> (bits - 1 - k)) & 1
        new = state.copy()
        if keep:
            new[n_bank + k] = 1.0
        else:
            new[k] = 0.0  # bank capacitor of weight 2^(bits-2-k)
        total += _transition_energy(caps, n_total, state, new)
        state = new
    return total


# ---------------------------------------------------------------------------
# topology trade study

@dataclass(frozen=True)
class TopologyRow:
    topology: str
    c_total_side: float        # physical per-side capacitance [F]
    sigma_ktc: float           # differential sampled-noise rms [V]
    e_avg_conversion: float    # converter discipline, all-code average [J]
    e_avg_textbook: float      # textbook discipline at matched capacitance [J]
    inl_max: float             # worst static nonlinearity of the ladder [LSB]


@dataclass(frozen=True)
class TradeReport:
    binary: TopologyRow
    split: TopologyRow
    energy_saving: float       # 1 - split/binary under ideal accounting
    c_reduction: float         # binary/split physical capacitance ratio

    def rows(self):
        return (self.binary, self.split)

    def to_json_dict(self) -> dict:
        def row(r):
            return {
                "topology": r.topology,
                "c_total_side_F": r.c_total_side,
                "sigma_ktc_V": r.sigma_ktc,
                "e_avg_conversion_J": r.e_avg_conversion,
                "e_avg_textbook_J": r.e_avg_textbook,
                "inl_max_lsb": r.inl_max,
            }
        return {
            "rows": [row(self.binary), row(self.split)],
            "energy_saving_ideal_accounting": self.energy_saving,
            "capacitance_reduction": self.c_reduction,
        }

    def to_csv(self) -> str:
        lines = ["topology,c_total_side_F,sigma_ktc_V,e_avg_conversion_J,"
                 "e_avg_textbook_J,inl_max_lsb,energy_saving,c_reduction"]
        for r in self.rows():
            lines.append(
                f"{r.topology},{r.c_total_side:.12g},{r.sigma_ktc:.12g},"
                f"{r.e_avg_conversion:.12g},{r.e_avg_textbook:.12g},"
                f"{r.inl_max:.12g},{self.energy_saving:.12g},{self.c_reduction:.12g}"
            )
        return "\n".join(lines) + "\n"


def _sigma_ktc_diff(c_eff_side: float, t_kelvin: float) -> float:
    """Differential sampled-noise rms for a per-side capacitance [V]."""
    if t_kelvin <= 0:
        return 0.0
    return math.sqrt(2.0 * K_BOLTZMANN * t_kelvin / c_eff_side)


def _avg_conversion_energy(array, cfg: AdcConfig) -> float:
    codes = range(2 ** cfg.bits)
    return sum(conversion_energy(c, array, cfg) for c in codes) / 2 ** cfg.bits


def compare_topologies(cfg: AdcConfig, rng: np.random.Generator) -> TradeReport:
    """Exhaustive-code energy, capacitance, noise and linearity comparison."""
    delta = net_full_scale(cfg.v_fs, cfg.c_dac, cfg.c_p) / 2 ** cfg.bits

    bin_cfg = replace(cfg, topology="binary")
    bin_array = build_cap_array(bin_cfg, rng)
    split_array = build_split_array(cfg, rng)

    # Textbook disciplines, matched capacitance, no parasitics: single-ended
    # energies in (unit * v_ref^2), complementary code on the far side, unit
    # scaled so each scheme's per-side array totals c_dac.
    u = cfg.c_dac / 2 ** cfg.bits * cfg.v_ref ** 2
    n_codes = 2 ** cfg.bits
    top = n_codes - 1
    e_conv = sum(conventional_energy(c, cfg.bits) +
                 conventional_energy(top - c, cfg.bits) for c in range(n_codes))
    e_recyc = sum(splitcap_energy(c, cfg.bits) +
                  splitcap_energy(top - c, cfg.bits) for c in range(n_codes))
    e_conv_avg = e_conv / n_codes * u
    e_recyc_avg = e_recyc / n_codes * u

    steps_bin = np.array([step_voltage(i, bin_array) for i in range(1, cfg.bits)])
    steps_split = np.array([step_voltage(i, split_array) for i in range(1, cfg.bits)])
    delta_split = steps_split[0] / 2 ** (cfg.bits - 1)

    binary = TopologyRow(
        topology="binary",
        c_total_side=0.5 * (bin_array.c_total_p + bin_array.c_total_n),
        sigma_ktc=_sigma_ktc_diff(bin_array.node_p, cfg.t_kelvin),
        e_avg_conversion=_avg_conversion_energy(bin_array, cfg),
        e_avg_textbook=e_conv_avg,
        inl_max=float(np.max(np.abs(inl_from_steps(steps_bin, cfg.bits, delta)))),
    )
    split = TopologyRow(
        topology="split",
        c_total_side=0.5 * (split_array.c_total_p + split_array.c_total_n),
        sigma_ktc=_sigma_ktc_diff(split_array.node_p, cfg.t_kelvin),
        e_avg_conversion=_avg_conversion_energy(split_array, cfg),
        e_avg_textbook=e_recyc_avg,
        inl_max=float(np.max(np.abs(inl_from_steps(steps_split, cfg.bits, delta_split)))),
    )
    return TradeReport(
        binary=binary,
        split=split,
        energy_saving=1.0 - split.e_avg_textbook / binary.e_avg_textbook,
        c_reduction=binary.c_total_side / split.c_total_side,
    )
