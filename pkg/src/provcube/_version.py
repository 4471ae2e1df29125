__version__ = "0.1.0"

ENGINE_AGENT = f"provcube/{__version__}"
