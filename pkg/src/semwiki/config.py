"""Engine configuration: key=value config file with environment
overrides (SEMWIKI_LISTEN, SEMWIKI_BASE_IRI, SEMWIKI_DATA_DIR,
SEMWIKI_FEDERATION_ALLOWLIST)."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .namespaces import WIKI_NS


@dataclass
class Config:
    listen: str = "127.0.0.1:8080"
    base_iri: str = WIKI_NS
    data_dir: str | None = None
    federation_allowlist: list[str] = field(default_factory=list)

    @property
    def host(self) -> str:
        return self.listen.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen.rsplit(":", 1)[1])

    def endpoint_allowed(self, url: str) -> bool:
        return any(url.startswith(prefix) for prefix in self.federation_allowlist)


_KEYS = ("listen", "base_iri", "data_dir", "federation_allowlist")


def load_config(path: str | None = None, env=None) -> Config:
    env = os.environ if env is None else env
    values: dict[str, str] = {}
    if path is not None:
        with open(path) as fh:
            for lineno, line in enumerate(fh, start=1):
                stripped = line.strip()
                if not stripped or stripped.startswith("#"):
                    continue
                if "=" not in stripped:
                    raise ValueError(f"{path}:{lineno}: expected key=value")
                key, _, value = stripped.partition("=")
                key = key.strip()
                if key not in _KEYS:
                    raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = value.strip()
    for key in _KEYS:
        env_key = "SEMWIKI_" + key.upper()
        if env_key in env:
            values[key] = env[env_key]
    config = Config()
    if "listen" in values:
        config.listen = values["listen"]
    if "base_iri" in values:
        config.base_iri = values["base_iri"]
    if "data_dir" in values:
        config.data_dir = values["data_dir"] or None
    if "federation_allowlist" in values:
        config.federation_allowlist = [
            item.strip() for item in values["federation_allowlist"].split(",")
            if item.strip()]
    return config
