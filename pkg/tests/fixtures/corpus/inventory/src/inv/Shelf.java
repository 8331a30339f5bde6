package inv;

public class Shelf {
    private final Item[] slots;
    private String label;
    private Inventory owner;

    public Shelf(int size, String label) {
        this.slots = new Item[size];
        this.label = label;
    }

    public void put(int index, Item item) {
        slots[index] = item;
    }

    public Item take(int index) {
        return slots[index];
    }

    public void moveTo(Inventory inventory, int index) {
        inventory.add(slots[index]);
        inventory.add(take(index));
        owner = inventory;
    }

    public void relabel(String label) {
        Report report = new Report(owner);
        report.line(this.label);
        report.line(label);
        report.item(new Item(label, 1, 2.5));
    }

    public Shelf copy() {
        Shelf s = new Shelf(slots.length, label);
        for (int i = 0; i < slots.length; i++) {
            s.put(i, slots[i]);
        }
        return s;
    }

    public void grow(Inventory inventory) {
        inventory.fill(new int[slots.length], -1);
        inventory.register(new Registry());
        owner.restock(label, Item.MAX_QUANTITY);
    }
}
