"""Operator command line.

    semwiki load FILE --graph huto          load an ontology or fixture
    semwiki import-pages DIR                bulk-save pages from disk
    semwiki query [FILE]                    run a query (stdin by default)
    semwiki rules [NAME] [--catalog FILE]   run a rule fixpoint
    semwiki export --graph data             canonical N-Triples to stdout
    semwiki federate --query FILE ...       import from a SPARQL endpoint
    semwiki serve                           start the HTTP service

Every command accepts --data-dir to operate on a durable directory; the
command refuses to start while a running service holds that directory's
lock. Without --data-dir the store is ephemeral.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .annotations import PageRef
from .config import load_config
from .errors import SemWikiError
from .federation import (EndpointConfig, fetch_select, fixture_transport,
                         parse_alignment, AlignmentMap)
from .rio import term_to_ntriples
from .rules import RuleSet, rdfs_lite_ruleset, ruleset_from_catalog
from .sparql.ast import Var
from .sparql.parser import parse_triple_templates
from .temporal import normalization_ruleset, temporal_ruleset
from .terms import Iri
from .wiki import WikiEngine, combined_ruleset

BUILTIN_RULESETS = {
    "rdfs": rdfs_lite_ruleset,
    "normalization": normalization_ruleset,
    "temporal": temporal_ruleset,
    "all": combined_ruleset,
}


def _engine(data_dir, base_iri=None) -> WikiEngine:
    kwargs = {}
    if base_iri:
        kwargs["base_iri"] = base_iri
    try:
        return WikiEngine(data_dir=data_dir, **kwargs)
    except SemWikiError as exc:
        raise click.ClickException(str(exc))


data_dir_option = click.option("--data-dir", type=click.Path(), default=None,
                               help="Durable journal/snapshot directory.")


@click.group()
def main():
    """Semantic wiki engine."""


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.option("--graph", required=True,
              help="Target warehouse (data|usco|huto or a graph IRI).")
@click.option("--format", "fmt", type=click.Choice(["ntriples", "turtle"]),
              default="ntriples", show_default=True)
@data_dir_option
def load(file, graph, fmt, data_dir):
    """Load an RDF file into a warehouse and print the new-quad count."""
    engine = _engine(data_dir)
    try:
        target = engine.resolve_graph(graph)
        count = engine.load_graph(Path(file).read_text(), fmt, target)
        click.echo(count)
    except (SemWikiError, ValueError) as exc:
        raise click.ClickException(str(exc))
    finally:
        engine.close()


@main.command("import-pages")
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@click.option("--author", default="import", show_default=True)
@data_dir_option
def import_pages(directory, author, data_dir):
    """Save every <dir>/<Namespace>/<Title>.wiki file as a page."""
    engine = _engine(data_dir)
    saved = 0
    try:
        root = Path(directory)
        for ns_dir in sorted(p for p in root.iterdir() if p.is_dir()):
            for page_file in sorted(ns_dir.glob("*.wiki")):
                title = page_file.stem.replace("_", " ")
                page = PageRef(ns_dir.name, title)
                result = engine.save_page(page, page_file.read_text(), author)
                click.echo(f"{ns_dir.name}:{title} rev {result.revision_id} "
                           f"+{result.quads_added} -{result.quads_removed}")
                saved += 1
    except (SemWikiError, ValueError) as exc:
        raise click.ClickException(str(exc))
    finally:
        engine.close()
    click.echo(f"{saved} pages imported")


def _print_solutions(solutions):
    names = [v.name for v in solutions.variables]
    rendered = [[term_to_ntriples(row[v]) if v in row else ""
                 for v in solutions.variables] for row in solutions.rows]
    widths = [max([len(n)] + [len(r[i]) for r in rendered])
              for i, n in enumerate(names)]
    click.echo("  ".join(n.ljust(w) for n, w in zip(names, widths)).rstrip())
    for row in rendered:
        click.echo("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())


@main.command()
@click.argument("queryfile", type=click.Path(exists=True), required=False)
@data_dir_option
def query(queryfile, data_dir):
    """Run a query from FILE or stdin. SELECT prints a table,
    CONSTRUCT/DESCRIBE print N-Triples, updates print the insert count
    (updates are allowed offline, unlike on the HTTP endpoint)."""
    text = Path(queryfile).read_text() if queryfile else sys.stdin.read()
    engine = _engine(data_dir)
    try:
        form, result = engine.sparql(text, allow_update=True)
        if form == "select":
            _print_solutions(result)
        elif form == "triples":
            from .rio import serialize_ntriples

            click.echo(serialize_ntriples(result), nl=False)
        else:
            click.echo(result)
    except SemWikiError as exc:
        raise click.ClickException(str(exc))
    finally:
        engine.close()


@main.command()
@click.argument("name", required=False, default="all")
@click.option("--catalog", type=click.Path(exists=True), default=None,
              help="Rule catalog file (overrides NAME).")
@data_dir_option
def rules(name, catalog, data_dir):
    """Run a rule fixpoint and print the report.

    The derived graph is cleared first, so counts reflect what this
    rule set alone derives from the asserted warehouses."""
    engine = _engine(data_dir)
    try:
        if catalog:
            ruleset = ruleset_from_catalog(Path(catalog).read_text())
        elif name in BUILTIN_RULESETS:
            ruleset = BUILTIN_RULESETS[name]()
        else:
            raise click.ClickException(
                f"unknown rule set {name!r}; valid names: "
                + ", ".join(sorted(BUILTIN_RULESETS)))
        from .rules import run_fixpoint
        from .store import INFERRED

        engine.store.clear_graph(INFERRED)
        report = run_fixpoint(engine.store, ruleset)
        click.echo(f"rounds: {report.rounds}")
        for rule_name, count in sorted(report.added_per_rule.items()):
            if count:
                click.echo(f"  {rule_name}: {count}")
        click.echo(f"total added: {report.total_added}")
    except SemWikiError as exc:
        raise click.ClickException(str(exc))
    finally:
        engine.close()


@main.command()
@click.option("--graph", required=True)
@data_dir_option
def export(graph, data_dir):
    """Print a warehouse as canonical N-Triples."""
    engine = _engine(data_dir)
    try:
        click.echo(engine.export_graph(engine.resolve_graph(graph)), nl=False)
    except SemWikiError as exc:
        raise click.ClickException(str(exc))
    finally:
        engine.close()


@main.command()
@click.option("--endpoint", default=None, help="Live SPARQL endpoint URL.")
@click.option("--fixture", type=click.Path(exists=True), default=None,
              help="Recorded response file (replay mode).")
@click.option("--query", "queryfile", type=click.Path(exists=True),
              required=True, help="SELECT query to send.")
@click.option("--alignment", type=click.Path(exists=True), default=None,
              help="Tab-separated external-to-local IRI map.")
@click.option("--template", "templatefile", type=click.Path(exists=True),
              required=True, help="Triple patterns instantiated per row.")
@click.option("--config", "configfile", type=click.Path(exists=True),
              default=None, help="Config whose allowlist gates live fetches.")
@data_dir_option
def federate(endpoint, fixture, queryfile, alignment, templatefile,
             configfile, data_dir):
    """Fetch rows from an endpoint (or replay a recorded response) and
    ingest them under the alignment. Live endpoints must appear on the
    config's federation allowlist when a config is given."""
    if (endpoint is None) == (fixture is None):
        raise click.ClickException("exactly one of --endpoint/--fixture required")
    if endpoint is not None and configfile is not None:
        config = load_config(configfile)
        if not config.endpoint_allowed(endpoint):
            raise click.ClickException(
                f"endpoint {endpoint} is not on the federation allowlist")
    transport = fixture_transport(fixture) if fixture else None
    url = endpoint or "fixture://" + str(fixture)
    config = EndpointConfig(url if endpoint else "http://replay.invalid/sparql")
    engine = _engine(data_dir)
    try:
        solutions = fetch_select(config, Path(queryfile).read_text(),
                                 transport=transport)
        amap = parse_alignment(Path(alignment).read_text()) if alignment \
            else AlignmentMap()
        template = parse_triple_templates(Path(templatefile).read_text())
        report = engine.federate(solutions, amap, template, source=url)
        click.echo(f"fetched rows: {report.fetched_rows}")
        click.echo(f"ingested quads: {report.ingested_quads}")
        click.echo(f"skipped rows: {len(report.skipped_rows)}")
        for index, reason in report.skipped_rows:
            click.echo(f"  row {index}: {reason}")
    except (SemWikiError, ValueError) as exc:
        raise click.ClickException(str(exc))
    finally:
        engine.close()


@main.command()
@click.option("--config", "configfile", type=click.Path(exists=True),
              default=None)
@click.option("--listen", default=None, help="host:port (overrides config).")
@click.option("--ui-dist", type=click.Path(), default=None,
              help="Directory of built UI assets to serve at /.")
@data_dir_option
def serve(configfile, listen, ui_dist, data_dir):
    """Start the HTTP service."""
    config = load_config(configfile)
    if listen:
        config.listen = listen
    if data_dir:
        config.data_dir = data_dir
    engine = _engine(config.data_dir, base_iri=config.base_iri)
    try:
        from .server import run_server

        run_server(engine, config.host, config.port, ui_dist)
    finally:
        engine.close()


if __name__ == "__main__":
    main()
