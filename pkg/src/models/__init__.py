"""Configuration models, enums and error types shared across packages."""
