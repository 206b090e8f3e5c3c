#include <iostream>
int main() { std::cout << "limitgen placeholder\n"; return 0; }
