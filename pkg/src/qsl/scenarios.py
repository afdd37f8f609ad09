"""Scenario catalog and the JSON scenario format.

A scenario bundles a generator, an initial state, a reference state for the
purity deviation and a time grid. Catalog entries are parametrized builders;
``load_scenario`` parses the JSON document format used by the CLI.

Rates in the catalog are the computed ones. Where the worked examples these
scenarios model quote different constants, the catalog notes say so in
``metadata["notes"]``.
"""

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from .lindblad import (
    Constant,
    Cosine,
    Exponential,
    LindbladGenerator,
    Step,
    check_density_matrix,
    diagonal_projection,
    maximally_mixed,
    partial_trace,
    random_density,
    random_pure_state,
)
from .linalg import as_matrix
from .liouville import steady_state
from .propagate import TimeGrid

I2 = np.eye(2, dtype=np.complex128)
SX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SY = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SZ = np.array([[1, 0], [0, -1]], dtype=np.complex128)
SPLUS = np.array([[0, 1], [0, 0]], dtype=np.complex128)
SMINUS = SPLUS.T.copy()
PAULI = {"I": I2, "X": SX, "Y": SY, "Z": SZ, "+": SPLUS, "-": SMINUS}


class ScenarioError(ValueError):
    """Malformed scenario document or invalid scenario parameters."""


REFERENCE_KINDS = ("origin", "maximally-mixed", "explicit")


@dataclass
class ReferenceState:
    kind: str = "origin"
    state: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in REFERENCE_KINDS:
            raise ScenarioError(f"unknown reference kind {self.kind!r}")
        if self.kind == "explicit":
            if self.state is None:
                raise ScenarioError("explicit reference state needs a matrix")
            self.state = check_density_matrix(self.state)

    def matrix(self, dim: int) -> np.ndarray:
        if self.kind == "origin":
            return np.zeros((dim, dim), dtype=np.complex128)
        if self.kind == "maximally-mixed":
            return maximally_mixed(dim)
        return self.state


@dataclass
class ScenarioSpec:
    name: str
    dim: int
    hamiltonian: Any
    jump_ops: List[np.ndarray]
    initial_state: np.ndarray
    reference_state: ReferenceState = field(default_factory=ReferenceState)
    prefactor: Callable[[float], float] = field(default_factory=Constant)
    grid: TimeGrid = field(default_factory=TimeGrid)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        try:
            self.initial_state = check_density_matrix(self.initial_state)
        except ValueError as exc:
            raise ScenarioError(f"{self.name}: initial state: {exc}") from exc
        if self.initial_state.shape != (self.dim, self.dim):
            raise ScenarioError(f"{self.name}: initial state does not have dim {self.dim}")

    def generator(self) -> LindbladGenerator:
        try:
            gen = LindbladGenerator(self.hamiltonian, self.jump_ops, self.prefactor)
        except ValueError as exc:
            raise ScenarioError(f"{self.name}: {exc}") from exc
        if gen.dim != self.dim:
            raise ScenarioError(f"{self.name}: generator dim {gen.dim} != {self.dim}")
        return gen

    @property
    def reference(self) -> Optional[np.ndarray]:
        """Reference matrix, or ``None`` for the origin (plain purity)."""
        if self.reference_state.kind == "origin":
            return None
        return self.reference_state.matrix(self.dim)

    @property
    def tight(self) -> bool:
        return bool(self.metadata.get("tight", False))


# ---------------------------------------------------------------- operators


def embed(op, site: int, m: int) -> np.ndarray:
    """Single-qubit ``op`` acting on ``site`` of an ``m``-qubit register."""
    out = np.ones((1, 1), dtype=np.complex128)
    for k in range(m):
        out = np.kron(out, op if k == site else I2)
    return out


def pauli_string(string: str, coeff=1.0) -> np.ndarray:
    """Kronecker product of single-qubit factors named by ``IXYZ+-``."""
    out = np.ones((1, 1), dtype=np.complex128)
    for ch in string:
        try:
            out = np.kron(out, PAULI[ch])
        except KeyError:
            raise ScenarioError(f"unknown Pauli factor {ch!r} in {string!r}") from None
    return _coeff(coeff) * out


def matrix_unit(dim: int, row: int, col: int, coeff=1.0) -> np.ndarray:
    out = np.zeros((dim, dim), dtype=np.complex128)
    out[row, col] = _coeff(coeff)
    return out


def _coeff(c) -> complex:
    if isinstance(c, (list, tuple)):
        return complex(c[0], c[1])
    return complex(c)


# ------------------------------------------------------------------- states


def ket(bits) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=np.complex128)
    v[int("".join(str(int(b)) for b in bits), 2)] = 1.0
    return v


def ghz_state(m: int, bits=None) -> np.ndarray:
    """Projector on ``(|b_1..b_M> + |1-b_1..1-b_M>)/sqrt(2)``."""
    bits = [0] * m if bits is None else list(bits)
    if m < 2 or len(bits) != m:
        raise ScenarioError(f"GHZ state needs M >= 2 and M bits, got M={m}, bits={bits}")
    psi = (ket(bits) + ket([1 - b for b in bits])) / np.sqrt(2.0)
    return np.outer(psi, psi.conj())


def bell_psi_plus() -> np.ndarray:
    psi = (ket([0, 1]) + ket([1, 0])) / np.sqrt(2.0)
    return np.outer(psi, psi.conj())


def werner(lam: float) -> np.ndarray:
    """``lam * I/4 + (1 - lam) |Psi+><Psi+|``."""
    _check_lambda(lam)
    return lam * maximally_mixed(4) + (1.0 - lam) * bell_psi_plus()


def bell_diagonal_mix(lam: float) -> np.ndarray:
    """``lam * Diag(|Psi+><Psi+|) + (1 - lam) |Psi+><Psi+|``.

    ``lam = 1`` is the classically correlated state, ``lam = 0`` the Bell state.
    """
    _check_lambda(lam)
    bell = bell_psi_plus()
    return lam * diagonal_projection(bell) + (1.0 - lam) * bell


def _check_lambda(lam):
    if not 0.0 <= lam <= 1.0:
        raise ScenarioError(f"lambda must lie in [0, 1], got {lam}")


# ----------------------------------------------------------------- catalog

_DEPHASING_NOTE = (
    "Jump operator sigma_z/2 reproduces the quoted qubit rates (Hilbert-HS 2, "
    "Liouville 1, P_D = 2|b|^2 e^-t); literal sigma_z would give 8 and 4."
)


def qubit_dephasing_scenario(variant="figure", a=None, b=None, seed=0, grid=None) -> ScenarioSpec:
    """Single qubit, ``A = sigma_z / 2``; ``H = sigma_z`` (text) or ``sigma_x`` (figure).

    With ``a`` and ``b`` unset the initial state is a random pure state.
    The text variant uses ``diag(a, 1-a)`` as reference (stationary since
    ``H`` commutes with the dephasing); the figure variant uses ``I/2``.
    """
    if variant not in ("text", "figure"):
        raise ScenarioError(f"variant must be 'text' or 'figure', got {variant!r}")
    if a is None and b is None:
        rho0 = random_pure_state(2, seed)
        a, b = rho0[0, 0].real, rho0[0, 1]
    else:
        a = 0.5 if a is None else float(a)
        b = 0.0 if b is None else _coeff(b)
        if not 0.0 <= a <= 1.0 or abs(b) ** 2 > a * (1.0 - a) + 1e-12:
            raise ScenarioError(f"(a, b) = ({a}, {b}) is not a density matrix")
        rho0 = np.array([[a, b], [np.conj(b), 1.0 - a]], dtype=np.complex128)
    h = SZ if variant == "text" else SX
    if variant == "text":
        ref = ReferenceState("explicit", np.diag([a, 1.0 - a]).astype(np.complex128))
    else:
        ref = ReferenceState("maximally-mixed")
    return ScenarioSpec(
        name=f"qubit_dephasing_{variant}",
        dim=2,
        hamiltonian=h,
        jump_ops=[0.5 * SZ],
        initial_state=rho0,
        reference_state=ref,
        grid=grid or TimeGrid(),
        metadata={"tight": variant == "text", "eq12": True, "notes": _DEPHASING_NOTE},
    )


def ghz_local_scenario(M=3, gamma=1.0, bits=None, initial="ghz", seed=0, grid=None) -> ScenarioSpec:
    """``M`` qubits with local dephasing ``sqrt(gamma) sigma_z`` on every site."""
    if not 2 <= M <= 6:
        raise ScenarioError(f"M must lie in [2, 6], got {M}")
    n = 2**M
    if initial == "ghz":
        rho0 = ghz_state(M, bits)
    elif initial == "product":
        v = ket(bits if bits is not None else [0] * M)
        rho0 = np.outer(v, v.conj())
    elif initial == "random_pure":
        rho0 = random_pure_state(n, seed)
    else:
        raise ScenarioError(f"unknown initial state {initial!r}")
    return ScenarioSpec(
        name="ghz_local",
        dim=n,
        hamiltonian=np.zeros((n, n), dtype=np.complex128),
        jump_ops=[np.sqrt(gamma) * embed(SZ, k, M) for k in range(M)],
        initial_state=rho0,
        reference_state=ReferenceState("explicit", diagonal_projection(rho0)),
        grid=grid or TimeGrid(),
        metadata={
            "tight": initial == "ghz",
            "notes": "Computed skew norm is 4*gamma*M; the quoted value is 2*M*gamma.",
        },
    )


def ghz_global_scenario(N=4, gamma=1.0, initial="random_pure", seed=0, grid=None) -> ScenarioSpec:
    """``N``-level register with one projector ``sqrt(gamma)|k><k|`` per level."""
    if N < 2:
        raise ScenarioError(f"N must be at least 2, got {N}")
    if initial == "random_pure":
        rho0 = random_pure_state(N, seed)
    elif initial == "random_density":
        rho0 = random_density(N, seed)
    elif initial == "ghz":
        m = int(round(np.log2(N)))
        if 2**m != N:
            raise ScenarioError("GHZ initial state needs N = 2^M")
        rho0 = ghz_state(m)
    else:
        raise ScenarioError(f"unknown initial state {initial!r}")
    return ScenarioSpec(
        name="ghz_global",
        dim=N,
        hamiltonian=np.zeros((N, N), dtype=np.complex128),
        jump_ops=[matrix_unit(N, k, k, np.sqrt(gamma)) for k in range(N)],
        initial_state=rho0,
        reference_state=ReferenceState("explicit", diagonal_projection(rho0)),
        grid=grid or TimeGrid(),
        metadata={
            "tight": True,
            "notes": "Computed nonzero skew singular value is 2*gamma; the quoted value is gamma.",
        },
    )


def nlevel_dephasing_scenario(N=4, phases=None, seed=0, grid=None) -> ScenarioSpec:
    """Unitary dephasing ``A = diag(exp(i phi_j))`` of an ``N``-level system."""
    if N < 2:
        raise ScenarioError(f"N must be at least 2, got {N}")
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, 2.0 * np.pi, N) if phases is None else np.asarray(phases, float)
    return ScenarioSpec(
        name="nlevel_dephasing",
        dim=N,
        hamiltonian=np.zeros((N, N), dtype=np.complex128),
        jump_ops=[np.diag(np.exp(1j * phases))],
        initial_state=random_pure_state(N, seed),
        reference_state=ReferenceState("maximally-mixed"),
        grid=grid or TimeGrid(),
        metadata={"eq12": True, "phases": phases.tolist()},
    )


def chain_hamiltonian(M: int, V0: float):
    """``H(t) = sum_i sigma_z^i + V0 cos(t) sum_i sigma_x^i sigma_x^{i+1}``."""
    hz = sum(embed(SZ, k, M) for k in range(M))
    vxx = sum(embed(SX, k, M) @ embed(SX, k + 1, M) for k in range(M - 1))

    def h(t):
        return hz + V0 * np.cos(t) * vxx

    return h


def interacting_chain_scenario(M=3, V0=0.1, gamma=1.0, seed=0, grid=None) -> ScenarioSpec:
    """Driven nearest-neighbour chain with local ``sqrt(gamma) sigma_z`` dephasing."""
    if not 2 <= M <= 6:
        raise ScenarioError(f"M must lie in [2, 6], got {M}")
    n = 2**M
    return ScenarioSpec(
        name="interacting_chain",
        dim=n,
        hamiltonian=chain_hamiltonian(M, V0),
        jump_ops=[np.sqrt(gamma) * embed(SZ, k, M) for k in range(M)],
        initial_state=random_pure_state(n, seed),
        reference_state=ReferenceState("maximally-mixed"),
        grid=grid or TimeGrid(),
        metadata={"eq12": True},
    )


def decorrelator_scenario(gamma=1.0, family="bell_diagonal_mix", lam=1.0, seed=0, grid=None) -> ScenarioSpec:
    """Two qubits; ``sqrt(gamma) I x sigma_+`` and ``sqrt(gamma) I x sigma_-`` reset B to ``I/2``.

    The reference is ``rho_A x I/2``, the state the dynamics converges to.
    """
    if family == "werner":
        rho0 = werner(lam)
    elif family == "bell_diagonal_mix":
        rho0 = bell_diagonal_mix(lam)
    elif family == "random_density":
        rho0 = random_density(4, seed)
    elif family == "random_pure":
        rho0 = random_pure_state(4, seed)
    else:
        raise ScenarioError(f"unknown family {family!r}")
    rho_a = partial_trace(rho0, 2, 2, keep="A")
    return ScenarioSpec(
        name="decorrelator",
        dim=4,
        hamiltonian=np.zeros((4, 4), dtype=np.complex128),
        jump_ops=[np.sqrt(gamma) * np.kron(I2, SPLUS), np.sqrt(gamma) * np.kron(I2, SMINUS)],
        initial_state=rho0,
        reference_state=ReferenceState("explicit", np.kron(rho_a, I2 / 2.0)),
        grid=grid or TimeGrid(),
        metadata={"tight": family == "bell_diagonal_mix" and lam == 1.0},
    )


CATALOG = {
    "fig1": (qubit_dephasing_scenario, {"variant": "figure", "a": None, "b": None, "seed": 0}),
    "fig2": (interacting_chain_scenario, {"M": 3, "V0": 0.1, "gamma": 1.0, "seed": 0}),
    "fig3": (decorrelator_scenario, {"gamma": 1.0, "family": "bell_diagonal_mix", "lam": 1.0, "seed": 0}),
    "ghz_local": (ghz_local_scenario, {"M": 3, "gamma": 1.0, "bits": None, "initial": "ghz", "seed": 0}),
    "ghz_global": (ghz_global_scenario, {"N": 4, "gamma": 1.0, "initial": "random_pure", "seed": 0}),
    "nlevel_dephasing": (nlevel_dephasing_scenario, {"N": 4, "phases": None, "seed": 0}),
    "decorrelator": (decorrelator_scenario, {"gamma": 1.0, "family": "werner", "lam": 0.5, "seed": 0}),
}

GRID_KEYS = ("t_start", "t_end", "steps")


def catalog_names() -> List[str]:
    return list(CATALOG)


def catalog_scenario(name: str, **overrides) -> ScenarioSpec:
    """Build a catalog entry; ``overrides`` may set builder params or grid fields."""
    try:
        builder, defaults = CATALOG[name]
    except KeyError:
        raise ScenarioError(f"unknown catalog scenario {name!r}; known: {catalog_names()}") from None
    params = dict(defaults)
    grid_kw = {}
    for key, value in overrides.items():
        key = key.split(".", 1)[1] if key.startswith("grid.") else key
        if key in GRID_KEYS:
            grid_kw[key] = value
        elif key in params:
            params[key] = value
        else:
            raise ScenarioError(f"{name}: unknown parameter {key!r}")
    try:
        grid = TimeGrid(**{**_grid_dict(TimeGrid()), **grid_kw})
        spec = builder(grid=grid, **params)
    except ScenarioError:
        raise
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{name}: {exc}") from exc
    spec.name = name
    spec.metadata["params"] = params
    return spec


def _grid_dict(g: TimeGrid) -> dict:
    return {"t_start": g.t_start, "t_end": g.t_end, "steps": g.steps}


# --------------------------------------------------------------- JSON format

_STATE_BUILDERS = {
    "ghz": lambda M, bits=None: ghz_state(M, bits),
    "werner": lambda lam: werner(lam),
    "bell_diagonal_mix": lambda lam: bell_diagonal_mix(lam),
    "random_pure": lambda dim, seed=None: random_pure_state(dim, seed),
    "random_density": lambda dim, seed=None: random_density(dim, seed),
    "maximally_mixed": lambda dim: maximally_mixed(dim),
    "pauli_string": lambda string, coeff=1.0: pauli_string(string, coeff),
    "matrix_unit": lambda dim, row, col, coeff=1.0: matrix_unit(dim, row, col, coeff),
}

_FUNCTIONS = {
    "constant": Constant,
    "cosine": Cosine,
    "exponential": Exponential,
    "step": Step,
}


def parse_matrix(doc) -> np.ndarray:
    """Matrix given as rows of ``[re, im]`` pairs, or a named builder."""
    if isinstance(doc, dict):
        name = doc.get("builder")
        if name not in _STATE_BUILDERS:
            raise ScenarioError(f"unknown builder {name!r}")
        try:
            return as_matrix(_STATE_BUILDERS[name](**doc.get("params", {})))
        except TypeError as exc:
            raise ScenarioError(f"builder {name!r}: {exc}") from exc
    try:
        arr = np.asarray(doc, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"malformed matrix: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ScenarioError(f"matrix must be a square array of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def matrix_to_json(m) -> list:
    m = as_matrix(m)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def parse_function(doc):
    if doc is None:
        return Constant()
    if isinstance(doc, (int, float)):
        return Constant(float(doc))
    name = doc.get("function", doc.get("builder"))
    if name not in _FUNCTIONS:
        raise ScenarioError(f"unknown function {name!r}; known: {sorted(_FUNCTIONS)}")
    try:
        return _FUNCTIONS[name](**doc.get("params", {}))
    except TypeError as exc:
        raise ScenarioError(f"function {name!r}: {exc}") from exc


def _parse_hamiltonian(doc, dim):
    if doc is None:
        return np.zeros((dim, dim), dtype=np.complex128)
    if isinstance(doc, dict) and "terms" in doc:
        terms = [(parse_matrix(t["operator"]), parse_function(t.get("modulation"))) for t in doc["terms"]]

        def h(t):
            out = np.zeros((dim, dim), dtype=np.complex128)
            for op, f in terms:
                out = out + f(t) * op
            return out

        if all(getattr(f, "is_constant", False) for _, f in terms):
            return h(0.0)
        return h
    return parse_matrix(doc)


def _parse_reference(doc, rho0, dim) -> ReferenceState:
    doc = doc or {"kind": "origin"}
    kind = doc.get("kind", "origin").replace("_", "-")
    if kind == "diagonal":
        return ReferenceState("explicit", diagonal_projection(rho0))
    if kind == "decorrelated":
        dim_a, dim_b = int(doc["dim_a"]), int(doc["dim_b"])
        rho_b = parse_matrix(doc["rho0"]) if "rho0" in doc else maximally_mixed(dim_b)
        return ReferenceState("explicit", np.kron(partial_trace(rho0, dim_a, dim_b, "A"), rho_b))
    if kind == "explicit":
        return ReferenceState("explicit", parse_matrix(doc["state"]))
    return ReferenceState(kind)


def scenario_from_dict(doc: dict) -> ScenarioSpec:
    """Parse a scenario document (see the README for the schema)."""
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    missing = [k for k in ("name", "dim", "initial_state") if k not in doc]
    if missing:
        raise ScenarioError(f"scenario document lacks keys {missing}")
    try:
        dim = int(doc["dim"])
        rho0 = parse_matrix(doc["initial_state"])
        grid = TimeGrid(**{**_grid_dict(TimeGrid()), **doc.get("grid", {})})
        hamiltonian = _parse_hamiltonian(doc.get("hamiltonian"), dim)
        jump_ops = [parse_matrix(a) for a in doc.get("jump_ops", [])]
        prefactor = parse_function(doc.get("prefactor"))
        ref_doc = doc.get("reference_state") or {}
        if ref_doc.get("kind", "").replace("_", "-") == "steady-state":
            ref = steady_reference(LindbladGenerator(hamiltonian, jump_ops, prefactor))
        else:
            ref = _parse_reference(ref_doc, rho0, dim)
        spec = ScenarioSpec(
            name=str(doc["name"]),
            dim=dim,
            hamiltonian=hamiltonian,
            jump_ops=jump_ops,
            initial_state=rho0,
            reference_state=ref,
            prefactor=prefactor,
            grid=grid,
            metadata=dict(doc.get("metadata", {})),
        )
        spec.generator()
    except ScenarioError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"invalid scenario document: {exc}") from exc
    return spec


def set_path(doc: dict, dotted: str, value) -> None:
    """Assign ``value`` at a dotted key path, creating intermediate objects."""
    keys = dotted.split(".")
    if len(keys) == 1 and keys[0] in GRID_KEYS:
        keys = ["grid", keys[0]]
    node = doc
    for k in keys[:-1]:
        node = node.setdefault(k, {})
        if not isinstance(node, dict):
            raise ScenarioError(f"cannot set {dotted!r}: {k!r} is not an object")
    node[keys[-1]] = value


def load_scenario(path, overrides=None) -> ScenarioSpec:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: not valid JSON: {exc}") from exc
    for key, value in (overrides or {}).items():
        set_path(doc, key, value)
    return scenario_from_dict(doc)


def resolve_scenario(name_or_path: str, overrides=None) -> ScenarioSpec:
    """Catalog name or path to a JSON document."""
    if name_or_path in CATALOG:
        return catalog_scenario(name_or_path, **(overrides or {}))
    try:
        return load_scenario(name_or_path, overrides)
    except FileNotFoundError:
        raise ScenarioError(f"{name_or_path!r} is neither a catalog name nor a file") from None


def steady_reference(gen: LindbladGenerator) -> ReferenceState:
    """Explicit reference from the generator's steady state at ``t = 0``."""
    return ReferenceState("explicit", steady_state(gen))
