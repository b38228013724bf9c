"""Definition-document loading, validation and serialization.

Documents are JSON.  All rationals are strings like ``"3"`` or ``"-2/5"``
so values survive round trips exactly.  Indices are 0-based throughout.
Top-level shape:

    {
      "group":       {"free_rank": 0, "torsion_orders": [2]},
      "bicharacter": {"builtin": "Z2"}            # or {"table": [["-1"]]}
      "algebras": {
        "name": {
          "arity": 3,
          "basis_degrees": [[1], [0], [1], [0]],
          "alpha": "identity",                    # or a row-major matrix
          "beta":  "identity",
          "bracket": [{"indices": [0,1,3], "value": ["1","0","0","0"]}, ...]
        }
      },
      "maps":       {"name": {"algebra": "...", "degree": [0], "matrix": [[..]]}},
      "subspaces":  {"name": {"algebra": "...", "vectors": [["1","0","0","0"]]}},
      "modules":    {"name": {"algebra": "...", "basis_degrees": [[..]],
                              "alpha_m": "identity", "beta_m": "identity",
                              "actions": [{"slot": 0, "indices": [..],
                                           "value": [..]}, ...]}},
      "assoc_algebras": {"name": {"dim": 2,
                                  "product": [{"indices": [0,0],
                                               "value": ["1","0"]}, ...]}}
    }

The loader is strict: evenness of twists, brackets, maps and actions, twist
commutation, torsion consistency of the bicharacter, homogeneity of
subspace vectors, and commutativity/associativity of product tables are all
validated; a violation rejects the file with the offending entity named.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .algebra import (
    BracketTable,
    ColorAlgebra,
    GradedSubspace,
    HomogeneousMap,
    check_axioms,
    hom_map_violations,
)
from .constructions import AssocAlgebra, BiHomAssocColorAlgebra
from .grading import Bicharacter, GradingGroup, GroupElement, builtin_bicharacter
from .linalg import MatrixQ, is_zero_vec, vec
from .modules import ActionTable, BiHomModule


class DocumentError(ValueError):
    """A definition file failed to parse or validate."""

    def __init__(self, message: str, entity: str = "", category: str = "validation"):
        super().__init__(f"{entity}: {message}" if entity else message)
        self.entity = entity
        self.category = category  # "parse" or "validation"


@dataclass
class DefinitionDocument:
    group: GradingGroup
    eps: Bicharacter
    algebras: dict[str, ColorAlgebra] = field(default_factory=dict)
    maps: dict[str, tuple[str, HomogeneousMap]] = field(default_factory=dict)
    subspaces: dict[str, tuple[str, GradedSubspace]] = field(default_factory=dict)
    modules: dict[str, BiHomModule] = field(default_factory=dict)
    assoc_algebras: dict[str, AssocAlgebra] = field(default_factory=dict)
    bihom_assoc_algebras: dict[str, BiHomAssocColorAlgebra] = field(default_factory=dict)
    digest: str = ""

    def algebra(self, name: str) -> ColorAlgebra:
        if name not in self.algebras:
            raise DocumentError(f"algebra {name!r} is not defined", name)
        return self.algebras[name]

    def module(self, name: str) -> BiHomModule:
        if name not in self.modules:
            raise DocumentError(f"module {name!r} is not defined", name)
        return self.modules[name]

    def map_for(self, name: str, algebra: str) -> HomogeneousMap:
        if name not in self.maps:
            raise DocumentError(f"map {name!r} is not defined", name)
        owner, hm = self.maps[name]
        if owner != algebra:
            raise DocumentError(
                f"map {name!r} is defined over algebra {owner!r}, not {algebra!r}", name
            )
        return hm

    def subspace_for(self, name: str, algebra: str) -> GradedSubspace:
        if name not in self.subspaces:
            raise DocumentError(f"subspace {name!r} is not defined", name)
        owner, sub = self.subspaces[name]
        if owner != algebra:
            raise DocumentError(
                f"subspace {name!r} is defined over algebra {owner!r}, not {algebra!r}",
                name,
            )
        return sub

    def assoc(self, name: str) -> AssocAlgebra:
        if name not in self.assoc_algebras:
            raise DocumentError(f"associative algebra {name!r} is not defined", name)
        return self.assoc_algebras[name]

    def bihom_assoc(self, name: str) -> BiHomAssocColorAlgebra:
        if name not in self.bihom_assoc_algebras:
            raise DocumentError(
                f"twisted product algebra {name!r} is not defined", name
            )
        return self.bihom_assoc_algebras[name]


def _rational(x: Any, where: str) -> Fraction:
    try:
        return Fraction(str(x))
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad rational {x!r}: {exc}", where) from exc


def _matrix(data: Any, dim: int, where: str) -> MatrixQ:
    if data == "identity":
        return MatrixQ.identity(dim)
    if data == "zero":
        return MatrixQ.zero(dim, dim)
    if not isinstance(data, list) or len(data) != dim:
        raise DocumentError(f"matrix must be {dim} rows or 'identity'/'zero'", where)
    rows = []
    for r, row in enumerate(data):
        if not isinstance(row, list) or len(row) != dim:
            raise DocumentError(f"matrix row {r} must have {dim} entries", where)
        rows.append([_rational(x, where) for x in row])
    return MatrixQ.from_rows(rows)


def _degrees(data: Any, group: GradingGroup, where: str) -> tuple[GroupElement, ...]:
    if not isinstance(data, list):
        raise DocumentError("basis_degrees must be a list", where)
    out = []
    for i, coords in enumerate(data):
        if not isinstance(coords, list) or len(coords) != group.num_generators:
            raise DocumentError(
                f"degree {i} needs {group.num_generators} coordinates", where
            )
        out.append(group.element(coords))
    return tuple(out)


def _load_group_and_eps(data: dict) -> tuple[GradingGroup, Bicharacter]:
    gspec = data.get("group")
    if not isinstance(gspec, dict):
        raise DocumentError("missing 'group' object", "group")
    group = GradingGroup(
        int(gspec.get("free_rank", 0)), tuple(gspec.get("torsion_orders", []))
    )
    bspec = data.get("bicharacter")
    if not isinstance(bspec, dict):
        raise DocumentError("missing 'bicharacter' object", "bicharacter")
    if "builtin" in bspec:
        eps = builtin_bicharacter(bspec["builtin"], bspec.get("n"))
        if eps.group != group:
            raise DocumentError(
                "builtin bicharacter group does not match the declared group",
                "bicharacter",
            )
        return group, eps
    table = bspec.get("table")
    if table is None:
        raise DocumentError("bicharacter needs 'builtin' or 'table'", "bicharacter")
    n = group.num_generators
    if len(table) != n or any(len(row) != n for row in table):
        raise DocumentError("bicharacter table must be square over the generators",
                            "bicharacter")
    try:
        eps = Bicharacter(
            group,
            tuple(tuple(_rational(x, "bicharacter") for x in row) for row in table),
        )
    except ValueError as exc:
        raise DocumentError(str(exc), "bicharacter") from exc
    return group, eps


def _validated_algebra(
    name: str,
    group: GradingGroup,
    eps: Bicharacter,
    spec: dict,
) -> ColorAlgebra:
    arity = spec.get("arity")
    if not isinstance(arity, int) or arity < 2:
        raise DocumentError("arity must be an integer >= 2", name)
    degrees = _degrees(spec.get("basis_degrees"), group, name)
    dim = len(degrees)
    alpha = _matrix(spec.get("alpha", "identity"), dim, name)
    beta = _matrix(spec.get("beta", "identity"), dim, name)
    entries = {}
    for t, item in enumerate(spec.get("bracket", [])):
        idx = item.get("indices")
        val = item.get("value")
        if not isinstance(idx, list) or len(idx) != arity:
            raise DocumentError(f"bracket entry {t} needs {arity} indices", name)
        if not isinstance(val, list) or len(val) != dim:
            raise DocumentError(f"bracket entry {t} needs a {dim}-vector value", name)
        key = tuple(int(i) for i in idx)
        if key in entries:
            raise DocumentError(f"duplicate bracket entry for indices {key}", name)
        entries[key] = [_rational(x, name) for x in val]
    try:
        L = ColorAlgebra(group, eps, arity, degrees, alpha, beta,
                         BracketTable(arity, dim, entries))
    except ValueError as exc:
        raise DocumentError(str(exc), name) from exc
    report = check_axioms(L)
    for check_name in ("twists-commute", "evenness"):
        res = report.result(check_name)
        if not res.ok:
            detail = res.witness.detail if res.witness else ""
            raise DocumentError(f"{check_name} violated: {detail}", name)
    return L


def load(path: str) -> DefinitionDocument:
    """Parse and validate a definition file."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise DocumentError(str(exc), path, category="parse") from exc
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DocumentError(f"not valid JSON: {exc}", path, category="parse") from exc
    if not isinstance(data, dict):
        raise DocumentError("top level must be an object", path, category="parse")
    return load_data(data, digest=hashlib.sha256(raw).hexdigest())


def load_data(data: dict, digest: str = "") -> DefinitionDocument:
    group, eps = _load_group_and_eps(data)
    doc = DefinitionDocument(group, eps, digest=digest)
    for name, spec in sorted(data.get("algebras", {}).items()):
        doc.algebras[name] = _validated_algebra(name, group, eps, spec)
    for name, spec in sorted(data.get("maps", {}).items()):
        owner = spec.get("algebra")
        if owner not in doc.algebras:
            raise DocumentError(f"map references unknown algebra {owner!r}", name)
        L = doc.algebras[owner]
        degree_coords = spec.get("degree", [0] * group.num_generators)
        degree = group.element(degree_coords)
        matrix = _matrix(spec.get("matrix"), L.dim, name)
        bad = hom_map_violations(matrix, degree, L.basis_degrees, L.basis_degrees)
        if bad:
            raise DocumentError(
                f"matrix entry {bad[0]} breaks the declared degree", name
            )
        doc.maps[name] = (owner, HomogeneousMap(degree, matrix))
    for name, spec in sorted(data.get("subspaces", {}).items()):
        owner = spec.get("algebra")
        if owner not in doc.algebras:
            raise DocumentError(f"subspace references unknown algebra {owner!r}", name)
        L = doc.algebras[owner]
        vectors = []
        for t, v in enumerate(spec.get("vectors", [])):
            if len(v) != L.dim:
                raise DocumentError(f"vector {t} has wrong length", name)
            w = vec(_rational(x, name) for x in v)
            if not is_zero_vec(w) and L.degree_of_vector(w) is None:
                raise DocumentError(f"vector {t} is not homogeneous", name)
            vectors.append(w)
        doc.subspaces[name] = (
            owner, GradedSubspace.from_vectors(L.basis_degrees, vectors)
        )
    for name, spec in sorted(data.get("modules", {}).items()):
        owner = spec.get("algebra")
        if owner not in doc.algebras:
            raise DocumentError(f"module references unknown algebra {owner!r}", name)
        L = doc.algebras[owner]
        degrees = _degrees(spec.get("basis_degrees"), group, name)
        md = len(degrees)
        alpha_m = _matrix(spec.get("alpha_m", "identity"), md, name)
        beta_m = _matrix(spec.get("beta_m", "identity"), md, name)
        per_slot: list[dict] = [dict() for _ in range(L.arity)]
        for t, item in enumerate(spec.get("actions", [])):
            slot = item.get("slot")
            if not isinstance(slot, int) or not 0 <= slot < L.arity:
                raise DocumentError(f"action entry {t} has bad slot", name)
            idx = item.get("indices")
            val = item.get("value")
            if not isinstance(idx, list) or len(idx) != L.arity:
                raise DocumentError(f"action entry {t} needs {L.arity} indices", name)
            if not isinstance(val, list) or len(val) != md:
                raise DocumentError(f"action entry {t} needs a {md}-vector value", name)
            per_slot[slot][tuple(int(i) for i in idx)] = [
                _rational(x, name) for x in val
            ]
        try:
            actions = tuple(
                ActionTable(L.arity, L.dim, md, s, per_slot[s])
                for s in range(L.arity)
            )
            doc.modules[name] = BiHomModule(L, degrees, alpha_m, beta_m, actions)
        except ValueError as exc:
            raise DocumentError(str(exc), name) from exc
    for name, spec in sorted(data.get("assoc_algebras", {}).items()):
        dim = spec.get("dim")
        if not isinstance(dim, int) or dim < 1:
            raise DocumentError("dim must be a positive integer", name)
        product = {}
        for t, item in enumerate(spec.get("product", [])):
            idx = item.get("indices")
            val = item.get("value")
            if not isinstance(idx, list) or len(idx) != 2:
                raise DocumentError(f"product entry {t} needs 2 indices", name)
            if not isinstance(val, list) or len(val) != dim:
                raise DocumentError(f"product entry {t} needs a {dim}-vector", name)
            product[tuple(int(i) for i in idx)] = [_rational(x, name) for x in val]
        try:
            doc.assoc_algebras[name] = AssocAlgebra(dim, product)
        except ValueError as exc:
            raise DocumentError(str(exc), name) from exc
    for name, spec in sorted(data.get("bihom_assoc_algebras", {}).items()):
        degrees = _degrees(spec.get("basis_degrees"), group, name)
        dim = len(degrees)
        alpha = _matrix(spec.get("alpha", "identity"), dim, name)
        beta = _matrix(spec.get("beta", "identity"), dim, name)
        product = {}
        for t, item in enumerate(spec.get("product", [])):
            idx = item.get("indices")
            val = item.get("value")
            if not isinstance(idx, list) or len(idx) != 2:
                raise DocumentError(f"product entry {t} needs 2 indices", name)
            if not isinstance(val, list) or len(val) != dim:
                raise DocumentError(f"product entry {t} needs a {dim}-vector", name)
            product[tuple(int(i) for i in idx)] = [_rational(x, name) for x in val]
        try:
            doc.bihom_assoc_algebras[name] = BiHomAssocColorAlgebra(
                group, eps, degrees, alpha, beta, BracketTable(2, dim, product)
            )
        except ValueError as exc:
            raise DocumentError(str(exc), name) from exc
    return doc


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _frac_str(x: Fraction) -> str:
    return str(x)


def _matrix_data(m: MatrixQ):
    ident = MatrixQ.identity(m.rows) if m.rows == m.cols else None
    if ident is not None and m == ident:
        return "identity"
    if m.is_zero():
        return "zero"
    return [[_frac_str(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]


def algebra_data(L: ColorAlgebra) -> dict:
    return {
        "arity": L.arity,
        "basis_degrees": [list(d.coords) for d in L.basis_degrees],
        "alpha": _matrix_data(L.alpha),
        "beta": _matrix_data(L.beta),
        "bracket": [
            {"indices": list(key), "value": [_frac_str(x) for x in value]}
            for key, value in L.bracket.items_sorted()
        ],
    }


def bicharacter_data(eps: Bicharacter) -> dict:
    return {
        "table": [
            [_frac_str(x) for x in row] for row in eps.generator_values
        ]
    }


def document_data(doc: DefinitionDocument) -> dict:
    data: dict = {
        "group": {
            "free_rank": doc.group.free_rank,
            "torsion_orders": list(doc.group.torsion_orders),
        },
        "bicharacter": bicharacter_data(doc.eps),
    }
    if doc.algebras:
        data["algebras"] = {n: algebra_data(L) for n, L in sorted(doc.algebras.items())}
    if doc.maps:
        data["maps"] = {
            n: {
                "algebra": owner,
                "degree": list(hm.degree.coords),
                "matrix": _matrix_data(hm.matrix),
            }
            for n, (owner, hm) in sorted(doc.maps.items())
        }
    if doc.subspaces:
        data["subspaces"] = {
            n: {
                "algebra": owner,
                "vectors": [[_frac_str(x) for x in v] for v in sub.basis_vectors()],
            }
            for n, (owner, sub) in sorted(doc.subspaces.items())
        }
    if doc.modules:
        data["modules"] = {
            n: {
                "algebra": _owner_of(doc, M),
                "basis_degrees": [list(d.coords) for d in M.basis_degrees],
                "alpha_m": _matrix_data(M.alpha_m),
                "beta_m": _matrix_data(M.beta_m),
                "actions": [
                    {"slot": s, "indices": list(key),
                     "value": [_frac_str(x) for x in value]}
                    for s in range(M.algebra.arity)
                    for key, value in M.actions[s].items_sorted()
                ],
            }
            for n, M in sorted(doc.modules.items())
        }
    if doc.assoc_algebras:
        data["assoc_algebras"] = {
            n: {
                "dim": A.dim,
                "product": [
                    {"indices": list(key), "value": [_frac_str(x) for x in value]}
                    for key, value in sorted(A.product.items())
                ],
            }
            for n, A in sorted(doc.assoc_algebras.items())
        }
    return data


def _owner_of(doc: DefinitionDocument, M: BiHomModule) -> str:
    for name, L in doc.algebras.items():
        if L == M.algebra:
            return name
    return ""


def dump(doc: DefinitionDocument, path: str):
    data = document_data(doc)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def save_algebra(
    group: GradingGroup, eps: Bicharacter, name: str, L: ColorAlgebra, path: str
):
    """Write a standalone document holding one algebra."""
    doc = DefinitionDocument(group, eps, algebras={name: L})
    dump(doc, path)
