"""Command-line surface: grid, moments, spectrum and verify"""

APP_VERSION_LABEL = "qdeform 1.0.0"
