#include <cstdio>
int main() { std::puts("spinsim placeholder"); return 0; }
