"""Catalog records: one JSON object per scheme family.

Edge colors are written ``a1,a2,...`` and face colors ``f1,...`` with
``inf`` for infinite faces. Each edge class is named ``a_i^k`` where ``k``
is 1 when its neighborhood reverses the direction of rotation.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path

from ..border_automaton import orbits, scheme_automaton
from ..cayley_analysis import stabilizer
from ..enumerator import SchemeFamily, counts
from ..scheme_core import (
    INF,
    LabelingScheme,
    SchemeError,
    VectorPair,
    make_neighborhood,
    scheme_key,
)

FORMAT = "vtplanar-catalog"
VERSION = 1


def family_id(degree: int, key: tuple) -> str:
    """Stable id derived from the canonical scheme key."""
    digest = hashlib.sha256(repr(key).encode()).hexdigest()
    return f"d{degree}-{digest[:12]}"


def format_xi(xi) -> str:
    return ",".join(f"a{c}" for c in xi)


def format_phi(phi) -> str:
    return ",".join("inf" if c == INF else f"f{c}" for c in phi)


def _parse_colors(text: str, prefix: str, allow_inf: bool) -> tuple[int, ...]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if allow_inf and tok == "inf":
            out.append(INF)
        elif tok.startswith(prefix) and tok[len(prefix):].isdigit():
            out.append(int(tok[len(prefix):]))
        else:
            raise SchemeError(f"bad color token {tok!r}")
    return tuple(out)


def parse_pair(xi: str, phi: str) -> VectorPair:
    return VectorPair(_parse_colors(xi, "a", False), _parse_colors(phi, "f", True))


def class_name(color: int, reverses: bool) -> str:
    return f"a{color}^{int(reverses)}"


def border_words(scheme: LabelingScheme) -> list[dict]:
    """Face borders as words on the edge classes.

    Finite faces are written ``(a1 a1 a2)^n`` with the orbit period inside
    the brackets; infinite faces use their ``left^w middle right^w`` form.
    """
    aut = scheme_automaton(scheme)
    out = []
    for orb in orbits(aut):
        if orb.cyclic:
            word = "(" + " ".join(f"a{c}" for c in orb.word) + ")^n"
            out.append({"face": f"f{orb.face_color}", "period": int(orb.size), "word": word})
        else:
            desc = orb.descriptor.render() if orb.descriptor is not None else ""
            out.append({"face": "inf", "period": None, "word": desc})
    return out


@dataclass(frozen=True)
class CatalogRecord:
    id: str
    degree: int
    xi: str
    phi: str
    gluings: tuple[dict, ...]
    ptv: str
    periodicity: str
    connectivity: str
    stabilizer: dict
    borders: tuple[dict, ...]

    @classmethod
    def from_family(cls, fam: SchemeFamily) -> "CatalogRecord":
        s = fam.scheme
        st = stabilizer(s)
        gl = []
        for c, nd in sorted(s.data().items()):
            gl.append({"class": class_name(c, nd.reverses), "i": nd.i + 1, "j": nd.j + 1})
        return cls(
            id=family_id(s.degree, fam.key),
            degree=s.degree,
            xi=format_xi(s.pair.xi),
            phi=format_phi(s.pair.phi),
            gluings=tuple(gl),
            ptv=str(fam.ptv),
            periodicity=fam.periodicity,
            connectivity=fam.connectivity,
            stabilizer={"kind": st.kind, "order": st.order, "rotations": st.rotation_order},
            borders=tuple(border_words(s)),
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["gluings"] = list(self.gluings)
        d["borders"] = list(self.borders)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CatalogRecord":
        try:
            return cls(
                id=d["id"],
                degree=int(d["degree"]),
                xi=d["xi"],
                phi=d["phi"],
                gluings=tuple(dict(g) for g in d["gluings"]),
                ptv=d["ptv"],
                periodicity=d["periodicity"],
                connectivity=d["connectivity"],
                stabilizer=dict(d["stabilizer"]),
                borders=tuple(dict(b) for b in d["borders"]),
            )
        except (KeyError, TypeError) as exc:
            raise SchemeError(f"malformed catalog record: {exc}") from exc

    def scheme(self) -> LabelingScheme:
        """Rebuild the labeling scheme described by the record."""
        pair = parse_pair(self.xi, self.phi)
        nbs = []
        for g in self.gluings:
            name = g["class"]
            try:
                head, k = name.split("^")
                color = int(head[1:])
            except ValueError as exc:
                raise SchemeError(f"bad edge class {name!r}") from exc
            nb = make_neighborhood(pair, int(g["i"]) - 1, int(g["j"]) - 1, k == "1")
            if nb is None:
                raise SchemeError(f"edge class {name} does not lock")
            if nb.color != color:
                raise SchemeError(f"edge class {name} sits on color a{nb.color}")
            nbs.append(nb)
        return LabelingScheme(pair, tuple(nbs))


def dumps(records, degree: int | None = None, totals: tuple[int, int] | None = None) -> str:
    header = {"format": FORMAT, "version": VERSION}
    if degree is not None:
        header["degree"] = degree
    if totals is not None:
        header["counts"] = {"P": totals[0], "A": totals[1]}
    header["records"] = [r.to_dict() for r in records]
    return json.dumps(header, indent=2, sort_keys=True) + "\n"


def loads(text: str) -> tuple[dict, list[CatalogRecord]]:
    """Parse a catalog; a bare record object is accepted as a one-record catalog."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemeError(f"not a catalog file: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemeError("catalog must be a JSON object")
    if "records" not in data:
        return {"format": FORMAT, "version": VERSION}, [CatalogRecord.from_dict(data)]
    if data.get("format") != FORMAT:
        raise SchemeError(f"unknown catalog format {data.get('format')!r}")
    if data.get("version") != VERSION:
        raise SchemeError(f"unsupported catalog version {data.get('version')!r}")
    header = {k: v for k, v in data.items() if k != "records"}
    return header, [CatalogRecord.from_dict(r) for r in data["records"]]


def records_of(families, include_aperiodic: bool = True) -> list[CatalogRecord]:
    return [
        CatalogRecord.from_family(f)
        for f in families
        if include_aperiodic or f.periodicity == "P"
    ]


def write_catalog(path, families, degree: int, include_aperiodic: bool = True) -> str:
    text = dumps(records_of(families, include_aperiodic), degree, counts(families))
    Path(path).write_text(text)
    return text


def read_catalog(path) -> list[CatalogRecord]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemeError(f"cannot read {path}: {exc}") from exc
    return loads(text)[1]


def find_record(records, ident: str) -> CatalogRecord:
    hits = [r for r in records if r.id == ident or r.id.startswith(ident)]
    if not hits:
        raise SchemeError(f"unknown scheme id {ident!r}")
    if len(hits) > 1:
        raise SchemeError(f"scheme id {ident!r} is ambiguous")
    return hits[0]


def record_matches(record: CatalogRecord) -> bool:
    """The stored id agrees with the key of the rebuilt scheme."""
    s = record.scheme()
    return family_id(s.degree, scheme_key(s)) == record.id
