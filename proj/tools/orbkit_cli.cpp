#include <cstdio>
int main(){ std::puts("orbkit cli placeholder"); return 0; }
