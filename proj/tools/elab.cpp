// Placeholder until the kernels land; the real CLI is built at the end.
int main() { return 0; }
