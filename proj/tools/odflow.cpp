#include <cstdio>

int main() {
    std::puts("odflow: placeholder");
    return 0;
}
