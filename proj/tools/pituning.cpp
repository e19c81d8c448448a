#include <iostream>

int main() {
    std::cout << "pituning: CLI not wired yet\n";
    return 0;
}
