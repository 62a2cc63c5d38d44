// Placeholder main; the full CLI lands with the cohomology modules.
int main() { return 0; }
