#include <cstdio>

int main() { std::puts("dskp-lab placeholder"); return 0; }
