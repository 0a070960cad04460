// placeholder; populated after the core modules stabilize
