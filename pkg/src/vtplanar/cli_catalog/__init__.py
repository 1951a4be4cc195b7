"""Command line, catalog files and SVG rendering."""

from .catalog import CatalogRecord, dumps, family_id, loads, read_catalog, write_catalog
from .svg import render_svg

__all__ = ["CatalogRecord", "dumps", "family_id", "loads", "read_catalog", "render_svg", "write_catalog"]
