import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

log = logging.getLogger(__name__)

DEFAULT_HOME = Path.home() / "qdeform"
HOME_ENV_VAR = "QDEFORM_HOME"


class ConfigManager:
    """Manages defaults for units, grids, output and verification"""

    def __init__(self, config_dir: Optional[Path] = None):
        if config_dir is None:
            config_dir = Path(os.environ.get(HOME_ENV_VAR, DEFAULT_HOME))
        self.config_dir = Path(config_dir)
        self.config_file = self.config_dir / "config.json"
        self.config = self._load_config()

        # Merge with defaults to ensure every key exists (never written back implicitly)
        defaults = self._get_default_config()
        for key, val in defaults.items():
            if key not in self.config:
                self.config[key] = val
            elif isinstance(val, dict) and isinstance(self.config[key], dict):
                for sub_key, sub_val in val.items():
                    self.config[key].setdefault(sub_key, sub_val)

    def _ensure_config_dir(self):
        """Ensure configuration directory exists"""
        if not self.config_dir.exists():
            self.config_dir.mkdir(parents=True)

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from file"""
        if not self.config_file.exists():
            return self._get_default_config()

        try:
            with open(self.config_file, 'r', encoding='utf-8') as f:
                loaded = json.load(f)
            if not isinstance(loaded, dict):
                raise ValueError("top-level JSON value is not an object")
            return loaded
        except Exception as e:
            log.warning(f"Ignoring unreadable config {self.config_file}: {e}")
            return self._get_default_config()

    def _get_default_config(self) -> Dict[str, Any]:
        """Get default configuration"""
        return {
            "units": {"m": 1.0, "omega": 1.0, "hbar": 1.0},
            "grid": {
                "pmin": -6.0,
                "pmax": 6.0,
                "xmin": -6.0,
                "xmax": 6.0,
                "np": 200,
                "nx": 200,
            },
            "output_format": "csv",
            "workers": 1,
            "verify_suites": [],
        }

    def save(self):
        """Save configuration to file"""
        try:
            self._ensure_config_dir()
            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(self.config, f, indent=4, ensure_ascii=False)
        except Exception as e:
            log.error(f"Error saving config: {e}")

    # --------------------------
    # Units
    # --------------------------

    def get_units(self) -> Dict[str, float]:
        """Get (m, omega, hbar) defaults"""
        return self._typed_section("units", float)

    def set_units(self, m: float, omega: float, hbar: float):
        self.config["units"] = {"m": float(m), "omega": float(omega), "hbar": float(hbar)}

    # --------------------------
    # Grid
    # --------------------------

    def get_grid(self) -> Dict[str, float]:
        """Get default grid window and resolution"""
        return self._typed_section("grid", float, counts=("np", "nx"))

    def set_grid(self, pmin: float, pmax: float, xmin: float, xmax: float, np_: int, nx: int):
        self.config["grid"] = {"pmin": pmin, "pmax": pmax, "xmin": xmin, "xmax": xmax,
                               "np": int(np_), "nx": int(nx)}

    def _typed_section(self, section: str, convert, counts=()) -> Dict[str, Any]:
        """Convert every default key of a section, falling back per key on bad values"""
        defaults = self._get_default_config()[section]
        stored = self.config.get(section)
        if not isinstance(stored, dict):
            log.warning(f"Config section '{section}' is not an object; using defaults")
            stored = {}
        values: Dict[str, Any] = {}
        for key, default in defaults.items():
            raw = stored.get(key, default)
            try:
                values[key] = int(raw) if key in counts else convert(raw)
            except (TypeError, ValueError) as e:
                log.warning(f"Invalid {section}.{key} = {raw!r} in config ({e}); using {default!r}")
                values[key] = default
        return values

    # --------------------------
    # Output / execution
    # --------------------------

    def get_output_format(self) -> str:
        """Get output format: 'csv' or 'json'"""
        value = self.config.get("output_format", "csv")
        return value if value in ("csv", "json") else "csv"

    def set_output_format(self, fmt: str):
        if fmt in ("csv", "json"):
            self.config["output_format"] = fmt

    def get_workers(self) -> int:
        """Get number of grid worker threads"""
        try:
            return max(1, int(self.config.get("workers", 1)))
        except (TypeError, ValueError):
            return 1

    def set_workers(self, workers: int):
        self.config["workers"] = max(1, int(workers))

    def get_verify_suites(self) -> List[str]:
        """Get default verification suites (empty means all)"""
        return list(self.config.get("verify_suites", []))

    def set_verify_suites(self, suites: List[str]):
        self.config["verify_suites"] = sorted(set(s for s in suites if s and s.strip()))
